// Copyright 2026 The mixasr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <functional>

#include "doctest.h"
#include "mixasr/ctc/ctc.h"
#include "mixasr/decoding/beam_search.h"
#include "mixasr/decoding/ctc_prefix.h"
#include "mixasr/decoding/lm.h"
#include "mixasr/decoding/scoring.h"
#include "mixasr/error.h"
#include "oracles.h"

using namespace mixasr;
using namespace mixasr::testing;

namespace {

// log P(CTC output starts with h), by enumerating every frame path.
double brute_prefix_logprob(const Tensor& lp, const TokenSeq& h) {
  const std::size_t T = lp.rows(), C = lp.cols();
  std::vector<std::size_t> path(T, 0);
  double total = kLogZero;
  std::function<void(std::size_t, double)> rec = [&](std::size_t t, double acc) {
    if (t == T) {
      const TokenSeq out = ctc_collapse(path);
      if (out.size() >= h.size() && std::equal(h.begin(), h.end(), out.begin()))
        total = log_add(total, acc);
      return;
    }
    for (std::size_t c = 0; c < C; ++c) {
      path[t] = c;
      rec(t + 1, acc + lp(t, c));
    }
  };
  rec(0, 0.0);
  return total;
}

CtcPrefixState prefix_state(const Tensor& lp, const TokenSeq& h) {
  CtcPrefixState s = ctc_prefix_initial(lp);
  for (Token t : h) s = ctc_prefix_extend(lp, s, t, 99);
  return s;
}

struct DecodeToy {
  Model model;
  Tensor enc;
};

DecodeToy decode_toy(std::uint64_t seed, std::size_t frames) {
  DecodeToy t{Model(tiny_model_config(3, 4)), {}};
  t.model.init_uniform(0.8, seed);
  Rng rng(seed + 1);
  const Tensor x = random_matrix(rng, frames, 4);
  t.enc = t.model.encoder().encode(t.model.params(), x).streams[seed % 2];
  return t;
}

}  // namespace

TEST_CASE("prefix probability of one symbol on a uniform frame is ln(1/3)") {
  const Tensor lp = Tensor::matrix(1, 3, std::log(1.0 / 3.0));
  const CtcPrefixScore s = ctc_prefix_score(lp, ctc_prefix_initial(lp), 1, 99);
  CHECK(s.state.psi == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(s.delta == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("prefix scores match path enumeration and close to the ctc loss") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t T = 1 + rng.uniform_int(5);
    const Tensor lp = random_logprobs(rng, T, 3);
    const TokenSeq h = random_labels(rng, rng.uniform_int(4), 2);
    const CtcPrefixState s = prefix_state(lp, h);
    const double brute = brute_prefix_logprob(lp, h);
    if (std::isinf(brute))
      CHECK(s.psi == kLogZero);
    else
      CHECK(std::abs(s.psi - brute) < 1e-9);
    const CtcPrefixState closed = ctc_prefix_extend(lp, s, 99, 99);
    CHECK(closed.closed);
    const double nll = ctc_nll(lp, h);
    if (std::isinf(nll))
      CHECK(closed.psi == kLogZero);
    else
      CHECK(std::abs(-closed.psi - nll) < 1e-9);
    CHECK_THROWS_AS(ctc_prefix_extend(lp, closed, 1, 99), Error);
  }
}

TEST_CASE("prefixes longer than the frames are impossible") {
  Rng rng(2);
  const Tensor lp = random_logprobs(rng, 2, 4);
  CHECK(prefix_state(lp, {1, 2, 3}).psi == kLogZero);
  CHECK(prefix_state(lp, {1, 1}).psi == kLogZero);
  CHECK(prefix_state(lp, {1, 2}).psi > kLogZero);
  const Tensor empty = Tensor::matrix(0, 4);
  CHECK(ctc_prefix_extend(empty, ctc_prefix_initial(empty), 99, 99).psi == 0.0);
  CHECK(prefix_state(empty, {1}).psi == kLogZero);
}

TEST_CASE("joint score drops zero-weight terms") {
  DecodeConfig c;
  c.ctc_weight = 0.0;
  c.lm_weight = 0.0;
  CHECK(joint_score(c, -2.0, kLogZero, kLogZero) == -2.0);
  c.ctc_weight = 0.25;
  c.lm_weight = 0.5;
  CHECK(joint_score(c, -2.0, -4.0, -1.0) == doctest::Approx(-1.5 - 1.0 - 0.5));
}

TEST_CASE("decode config validation and length limit") {
  DecodeConfig c;
  CHECK(c.max_symbols(5) == 5);
  c.max_len_ratio = 0.5;
  CHECK(c.max_symbols(5) == 3);
  c.beam = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.ctc_weight = 1.1;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(parse_ctc_scoring("rescore") == CtcScoring::kRescore);
  CHECK_THROWS_AS(parse_ctc_scoring("full"), Error);
}

TEST_CASE("wide beam search equals the exhaustive joint-score argmax") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  TinyLm lm(v, LmConfig{4, 5});
  lm.init_uniform(0.8, 3);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DecodeToy toy = decode_toy(seed, 3);
    for (double ctc_w : {0.0, 0.3, 1.0})
      for (const TinyLm* use_lm : {static_cast<const TinyLm*>(nullptr), static_cast<const TinyLm*>(&lm)}) {
        DecodeConfig c;
        c.beam = 64;
        c.ctc_weight = ctc_w;
        c.lm_weight = 0.5;
        const StreamDecode got = beam_search_stream(toy.model, seed % 2, toy.enc, use_lm, c);
        const ExhaustiveBest want = exhaustive_decode(toy.model, seed % 2, toy.enc, use_lm, c);
        CHECK(got.tokens == want.tokens);
        CHECK(std::abs(got.score - want.score) < 1e-9);
        CHECK(got.score == doctest::Approx(joint_score(c, got.att, got.ctc, use_lm ? got.lm : 0.0)));
      }
  }
}

TEST_CASE("rescoring mode reports the full ctc score of its output") {
  const DecodeToy toy = decode_toy(3, 4);
  DecodeConfig c;
  c.ctc_mode = CtcScoring::kRescore;
  const StreamDecode d = beam_search_stream(toy.model, 1, toy.enc, nullptr, c);
  const Tensor lp = toy.model.ctc_logprobs(toy.enc);
  CHECK(d.ctc == doctest::Approx(-ctc_nll(lp, d.tokens)).epsilon(1e-12));
  CHECK(d.att == doctest::Approx(attention_logprob(toy.model, 1, toy.enc, d.tokens)).epsilon(1e-12));
}

TEST_CASE("beam 1 without ctc or lm is greedy attention decoding") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DecodeToy toy = decode_toy(seed, 5);
    DecodeConfig c;
    c.beam = 1;
    c.ctc_weight = 0.0;
    const StreamDecode d = beam_search_stream(toy.model, 0, toy.enc, nullptr, c);
    const auto& dec = toy.model.decoder();
    const Tensor projected = dec.precompute(toy.model.params(), 0, toy.enc);
    StepState state = dec.initial_state(toy.enc.rows());
    TokenSeq greedy;
    while (true) {
      auto logp = dec.advance(toy.model.params(), 0, toy.enc, projected, state);
      const bool limit = greedy.size() >= c.max_symbols(toy.enc.rows());
      const Token t = limit ? toy.model.vocab().eos() : toy.model.vocab().att_token(argmax(logp));
      if (t == toy.model.vocab().eos()) break;
      greedy.push_back(t);
      state.prev = t;
    }
    CHECK(d.tokens == greedy);
  }
}

TEST_CASE("decoded attention has one normalized row per emitted token") {
  const DecodeToy toy = decode_toy(4, 6);
  const StreamDecode d = beam_search_stream(toy.model, 0, toy.enc, nullptr, DecodeConfig{});
  CHECK(d.attention.rows() == d.tokens.size() + 1);
  CHECK(d.attention.cols() == 6);
  for (std::size_t r = 0; r < d.attention.rows(); ++r) {
    double z = 0.0;
    for (double w : d.attention.row(r)) z += w;
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(d.tokens.size() <= 6);
}

TEST_CASE("best score does not decrease with the beam width") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DecodeToy toy = decode_toy(seed, 5);
    double prev = kLogZero;
    for (std::size_t beam : {1, 2, 4, 8}) {
      DecodeConfig c;
      c.beam = beam;
      const double s = beam_search_stream(toy.model, 0, toy.enc, nullptr, c).score;
      CHECK(s >= prev - 1e-12);
      prev = s;
    }
  }
}

TEST_CASE("beam search rejects empty streams and foreign language models") {
  const DecodeToy toy = decode_toy(1, 3);
  CHECK_THROWS_AS(beam_search_stream(toy.model, 0, Tensor::matrix(0, 4), nullptr, {}), Error);
  const TinyLm other(Vocabulary::with_default_symbols(4), LmConfig{});
  CHECK_THROWS_AS(beam_search_stream(toy.model, 0, toy.enc, &other, {}), Error);
}

TEST_CASE("edit distance examples") {
  const std::vector<char> kitten{'k', 'i', 't', 't', 'e', 'n'};
  const std::vector<char> sitting{'s', 'i', 't', 't', 'i', 'n', 'g'};
  const EditCounts e = edit_distance(kitten, sitting);
  CHECK(e.distance == 3);
  CHECK(e.substitutions == 2);
  CHECK(e.insertions == 1);
  CHECK(e.deletions == 0);
  const EditCounts d = edit_distance(TokenSeq{1, 2, 3}, TokenSeq{});
  CHECK(d.distance == 3);
  CHECK(d.deletions == 3);
  CHECK(edit_distance(TokenSeq{}, TokenSeq{4, 4}).insertions == 2);
}

TEST_CASE("edit distance is a metric and matches the plain recurrence") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const TokenSeq a = random_labels(rng, rng.uniform_int(7), 3);
    const TokenSeq b = random_labels(rng, rng.uniform_int(7), 3);
    const TokenSeq c = random_labels(rng, rng.uniform_int(7), 3);
    const EditCounts ab = edit_distance(a, b);
    CHECK(ab.distance == levenshtein(a, b));
    CHECK(ab.distance == ab.substitutions + ab.insertions + ab.deletions);
    CHECK(b.size() + ab.deletions == a.size() + ab.insertions);
    CHECK(edit_distance(a, a).distance == 0);
    CHECK(ab.distance == edit_distance(b, a).distance);
    CHECK(edit_distance(a, c).distance <= ab.distance + edit_distance(b, c).distance);
    if (a != b) CHECK(ab.distance > 0);
  }
}

TEST_CASE("permutation-minimum scoring") {
  const std::vector<TokenSeq> refs{{1, 2, 3}, {4, 4}};
  const std::vector<TokenSeq> swapped{{4, 4}, {1, 2, 3}};
  const PermutationScore p = score_permutation_min(swapped, refs);
  CHECK(p.errors.distance == 0);
  CHECK(p.assignment == std::vector<std::size_t>{1, 0});
  CHECK(p.ref_length == 5);
  const PermutationScore q = score_permutation_min(std::vector<TokenSeq>{{1, 2}, {4}}, refs);
  CHECK(q.errors.distance == 2);
  CHECK(q.error_rate() == doctest::Approx(0.4));
  CHECK_THROWS_AS(score_permutation_min(std::vector<TokenSeq>{{1}}, refs), Error);

  EvalReport r;
  r.add("u1", swapped, refs);
  r.add("u2", {{1}, {}}, {{1}, {2, 3}});
  CHECK(r.char_errors.distance == 2);
  CHECK(r.cer() == doctest::Approx(2.0 / 8.0));
  CHECK(r.wer() == r.cer());
  EvalReport w;
  w.add("u", {{1, 4, 2}}, {{1, 4, 3}}, Token{4});
  CHECK(w.word_ref_length == 2);
  CHECK(w.wer() == doctest::Approx(0.5));
  CHECK(split_words({4, 1, 4, 4, 2, 3}, Token{4}) == std::vector<TokenSeq>{{1}, {2, 3}});
}

TEST_CASE("language model distributions, determinism and persistence") {
  const Vocabulary v = Vocabulary::with_default_symbols(4);
  TinyLm lm(v, LmConfig{3, 5});
  lm.init_uniform(0.5, 1);
  TinyLm::State s = lm.initial_state();
  for (Token t : {v.sos(), Token{2}, Token{4}}) {
    const auto lp = lm.lm_step(s, t);
    CHECK(lp.size() == v.att_classes());
    double z = 0.0;
    for (double x : lp) z += std::exp(x);
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lm.lm_step(s, 0), Error);

  // Sum over every sequence of length <= 2 plus the eos mass left over.
  double total = 0.0;
  for (Token a = 1; a <= 4; ++a)
    for (Token b = 1; b <= 4; ++b) total += std::exp(lm.sequence_logprob({a, b}));
  CHECK(total < 1.0);
  CHECK(lm.sequence_logprob({1, 2}) < 0.0);

  const auto dir = scratch_dir("lm");
  lm.save(dir / "lm.bin");
  const TinyLm back = TinyLm::load(dir / "lm.bin");
  CHECK(back.vocab() == v);
  CHECK(back.params() == lm.params());
  CHECK(back.sequence_logprob({3, 1}) == lm.sequence_logprob({3, 1}));
}

TEST_CASE("language model gradients") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  TinyLm lm(v, LmConfig{3, 4});
  lm.init_uniform(0.7, 2);
  const LossFn loss = [&](const ParamStore&, GradStore* g) { return lm.nll({1, 3, 3, 2}, g); };
  CHECK(grad_check(loss, lm.params(), 1e-5, 1, 1e-6).max_rel_error < 1e-5);
}

TEST_CASE("language model training learns a repeated sequence") {
  const Vocabulary v = Vocabulary::with_default_symbols(4);
  const std::vector<TokenSeq> data(20, TokenSeq{1, 2, 3, 4});
  LmConfig c;
  c.epochs = 300;
  const TinyLm a = train_lm(data, v, c);
  const TinyLm b = train_lm(data, v, c);
  CHECK(a.params() == b.params());
  const double ppl = lm_perplexity(a, data);
  CHECK(ppl < 1.5);
  CHECK(a.sequence_logprob({1, 2, 3, 4}) > a.sequence_logprob({4, 3, 2, 1}));
  CHECK(lm_perplexity(a, {}) == 1.0);
  CHECK_THROWS_AS(train_lm({}, v, c), Error);
}
