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
#include <cstring>
#include <numeric>

#include "doctest.h"
#include "mixasr/attdec/decoder.h"
#include "mixasr/error.h"
#include "mixasr/training/mtl.h"
#include "oracles.h"

using namespace mixasr;
using namespace mixasr::testing;

namespace {

struct Toy {
  Vocabulary vocab = Vocabulary::with_default_symbols(3);
  ParamStore params;
  AttentionDecoder dec;
  Tensor enc;

  explicit Toy(std::uint64_t seed, AttentionMode mode = AttentionMode::kShared,
               AttentionQuery query = AttentionQuery::kDecoderState) {
    DecoderConfig cfg;
    cfg.mode = mode;
    cfg.query = query;
    cfg.attention_dim = 4;
    cfg.conv_channels = 2;
    cfg.conv_kernel = 3;
    cfg.hidden = 5;
    cfg.embed_dim = 3;
    dec = AttentionDecoder(params, cfg, vocab, 2, 4);
    Rng rng(seed);
    randomize(params, rng, 0.7);
    enc = random_matrix(rng, 6, 4);
  }
};

}  // namespace

TEST_CASE("attention weights form a distribution and context is their mix") {
  Toy toy(1);
  const Tensor projected = toy.dec.precompute(toy.params, 0, toy.enc);
  StepState state = toy.dec.initial_state(toy.enc.rows());
  for (Token t : {toy.vocab.sos(), Token{2}, Token{1}, Token{3}}) {
    state.prev = t;
    const auto logp = toy.dec.advance(toy.params, 0, toy.enc, projected, state);
    double z = 0.0;
    for (double w : state.att.weights) {
      CHECK(w >= 0.0);
      z += w;
    }
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t d = 0; d < 4; ++d) {
      double c = 0.0;
      for (std::size_t t2 = 0; t2 < 6; ++t2) c += state.att.weights[t2] * toy.enc(t2, d);
      CHECK(state.att.context[d] == doctest::Approx(c).epsilon(1e-12));
    }
    double pz = 0.0;
    for (double lp : logp) pz += std::exp(lp);
    CHECK(pz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(logp.size() == toy.vocab.att_classes());
  }
}

TEST_CASE("initial attention state is uniform") {
  Toy toy(2);
  const StepState s = toy.dec.initial_state(4);
  for (double w : s.att.weights) CHECK(w == 0.25);
  CHECK(s.prev == toy.vocab.sos());
  CHECK_THROWS_AS(toy.dec.initial_state(0), Error);
}

TEST_CASE("decoder history must be a symbol, sos or eos") {
  Toy toy(3);
  const Tensor projected = toy.dec.precompute(toy.params, 0, toy.enc);
  StepState state = toy.dec.initial_state(toy.enc.rows());
  state.prev = 0;
  CHECK_THROWS_AS(toy.dec.advance(toy.params, 0, toy.enc, projected, state), Error);
  CHECK_THROWS_AS(toy.dec.forward(toy.params, 0, toy.enc, {}, HistorySource::teacher_forcing()),
                  Error);
}

TEST_CASE("attention step gradients") {
  Rng rng(41);
  for (int trial = 0; trial < 3; ++trial) CHECK(attention_step_grad_check(rng).max_rel_error < 1e-5);
}

TEST_CASE("decoder gradients for every mode and query") {
  Rng rng(42);
  for (auto mode : {AttentionMode::kShared, AttentionMode::kSpeakerParallel})
    for (auto query : {AttentionQuery::kDecoderState, AttentionQuery::kPreviousContext}) {
      const auto r = decoder_grad_check(rng, mode, query);
      CHECK(r.max_rel_error < 1e-4);
    }
}

TEST_CASE("teacher-forced forward equals stepping by hand") {
  Toy toy(4);
  const TokenSeq ref{2, 2, 1};
  const auto run = toy.dec.forward(toy.params, 1, toy.enc, ref, HistorySource::teacher_forcing());
  CHECK(run.steps.size() == 4);
  CHECK(run.attention.rows() == 4);
  CHECK(run.steps[0].history == toy.vocab.sos());
  CHECK(run.steps[3].target == toy.vocab.att_class(toy.vocab.eos()));
  const Tensor projected = toy.dec.precompute(toy.params, 1, toy.enc);
  StepState state = toy.dec.initial_state(toy.enc.rows());
  double nll = 0.0;
  for (std::size_t n = 0; n <= ref.size(); ++n) {
    const auto logp = toy.dec.advance(toy.params, 1, toy.enc, projected, state);
    const Token target = n < ref.size() ? ref[n] : toy.vocab.eos();
    nll -= logp[toy.vocab.att_class(target)];
    state.prev = target;
  }
  CHECK(run.nll == nll);
  CHECK(toy.dec.teacher_forced_nll(toy.params, 1, toy.enc, ref) == nll);
}

TEST_CASE("fixed history feeds exactly the given tokens") {
  Toy toy(5);
  const TokenSeq ref{1, 2};
  const TokenSeq hist{3, 3};
  const auto run = toy.dec.forward(toy.params, 0, toy.enc, ref, HistorySource::fixed_tokens(hist));
  CHECK(run.steps[1].history == 3);
  CHECK(run.steps[2].history == 3);
  const TokenSeq too_short{3};
  CHECK_THROWS_AS(
      toy.dec.forward(toy.params, 0, toy.enc, {1, 2, 3}, HistorySource::fixed_tokens(too_short)),
      Error);
}

TEST_CASE("scheduled sampling with p = 0 is teacher forcing") {
  Toy toy(6);
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const TokenSeq ref = random_labels(rng, 1 + rng.uniform_int(5), 3);
    Rng ss_rng(trial);
    const auto tf = toy.dec.forward(toy.params, 0, toy.enc, ref, HistorySource::teacher_forcing());
    const auto ss = toy.dec.forward(toy.params, 0, toy.enc, ref,
                                    HistorySource::scheduled({0.0, &ss_rng}));
    CHECK(std::memcmp(&tf.nll, &ss.nll, sizeof(double)) == 0);
    CHECK(tf.attention == ss.attention);
  }
}

TEST_CASE("scheduled sampling with p = 1 feeds back predictions") {
  Toy toy(7);
  Rng ss_rng(1);
  const TokenSeq ref{1, 2, 3, 1};
  const auto run = toy.dec.forward(toy.params, 0, toy.enc, ref, HistorySource::scheduled({1.0, &ss_rng}));
  for (std::size_t n = 1; n < run.steps.size(); ++n)
    CHECK(run.steps[n].history ==
          toy.vocab.att_token(argmax(run.steps[n - 1].logprobs)));
}

TEST_CASE("scheduled history draws are Bernoulli(p)") {
  Rng rng(2);
  const SamplingPolicy policy{0.5, &rng};
  const int n = 20000;
  int predicted = 0;
  for (int i = 0; i < n; ++i) predicted += scheduled_history(1, 2, policy) == 2;
  const double frac = static_cast<double>(predicted) / n;
  CHECK(frac >= 0.47);
  CHECK(frac <= 0.53);

  // p = 0 still advances the generator once per call.
  Rng a(5), b(5);
  scheduled_history(1, 2, {0.0, &a});
  b.uniform();
  CHECK(a.next_u64() == b.next_u64());
  CHECK_THROWS_AS(scheduled_history(1, 2, {1.5, &a}), Error);
  CHECK_THROWS_AS(scheduled_history(1, 2, {0.5, nullptr}), Error);
}

TEST_CASE("speaker-parallel attention keeps one parameter set per stream") {
  Toy shared(8), par(8, AttentionMode::kSpeakerParallel);
  CHECK(shared.dec.num_attention_sets() == 1);
  CHECK(par.dec.num_attention_sets() == 2);
  CHECK(par.params.find("att1.conv").has_value());
  CHECK_FALSE(shared.params.find("att1.conv").has_value());
}

TEST_CASE("tied speaker-parallel attention reproduces shared mode") {
  Model shared(tiny_model_config());
  shared.init_uniform(0.5, 3);
  const Model par = tied_parallel(shared);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MixtureSample s = tiny_sample(shared.vocab(), seed);
    GradStore gs(shared.params()), gp(par.params());
    const MtlResult a = mtl_loss(shared, s, 0.3, HistorySource::teacher_forcing(), &gs);
    const MtlResult b = mtl_loss(par, s, 0.3, HistorySource::teacher_forcing(), &gp);
    CHECK(std::memcmp(&a.loss, &b.loss, sizeof(double)) == 0);
    // Gradients of tied sets sum to the shared gradient.
    for (ParamId id = 0; id < shared.params().size(); ++id) {
      const std::string& name = shared.params().name(id);
      if (name.rfind("att0", 0) != 0) {
        CHECK(gs[id] == gp[*par.params().find(name)]);
        continue;
      }
      const Tensor& g0 = gp[*par.params().find(name)];
      const Tensor& g1 = gp[*par.params().find("att1" + name.substr(4))];
      for (std::size_t k = 0; k < g0.size(); ++k)
        CHECK(g0[k] + g1[k] == doctest::Approx(gs[id][k]).epsilon(1e-12).scale(1e-12));
    }
  }
}
