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

#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "mixasr/attdec/decoder.h"
#include "mixasr/ctc/ctc.h"
#include "mixasr/decoding/beam_search.h"
#include "mixasr/decoding/lm.h"
#include "mixasr/numerics/grad_check.h"
#include "mixasr/numerics/ops.h"
#include "mixasr/training/mtl.h"
#include "test_util.h"

namespace mixasr::testing {

inline void randomize(ParamStore& params, Rng& rng, double range) {
  for (ParamId id = 0; id < params.size(); ++id)
    for (double& v : params.value(id).values()) v = rng.uniform(-range, range);
}

// Plain O(L^2) dynamic program, no backtrace.
template <typename T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Sum of attention-decoder log-probabilities of seq followed by eos.
inline double attention_logprob(const Model& model, std::size_t stream, const Tensor& enc,
                                const TokenSeq& seq) {
  const AttentionDecoder& dec = model.decoder();
  const Tensor projected = dec.precompute(model.params(), stream, enc);
  StepState state = dec.initial_state(enc.rows());
  double total = 0.0;
  for (std::size_t n = 0; n <= seq.size(); ++n) {
    const auto logp = dec.advance(model.params(), stream, enc, projected, state);
    const Token target = n < seq.size() ? seq[n] : model.vocab().eos();
    total += logp[model.vocab().att_class(target)];
    state.prev = target;
  }
  return total;
}

struct ExhaustiveBest {
  TokenSeq tokens;
  double score = -std::numeric_limits<double>::infinity();
};

// Scores every symbol sequence up to the decoder's length limit with the
// full (non-incremental) joint score and returns the best one. Ties keep the
// first sequence in shortlex order.
inline ExhaustiveBest exhaustive_decode(const Model& model, std::size_t stream, const Tensor& enc,
                                        const TinyLm* lm, const DecodeConfig& config) {
  const std::size_t V = model.vocab().num_symbols();
  const std::size_t max_len = config.max_symbols(enc.rows());
  const Tensor ctc_lp = model.ctc_logprobs(enc);
  ExhaustiveBest best;
  TokenSeq seq;
  std::function<void(std::size_t)> visit = [&](std::size_t len) {
    if (seq.size() == len) {
      const double att = attention_logprob(model, stream, enc, seq);
      const double ctc = -ctc_nll(ctc_lp, seq);
      const double lmv = lm ? lm->sequence_logprob(seq) : 0.0;
      const double score = joint_score(config, att, ctc, lmv);
      if (score > best.score) best = {seq, score};
      return;
    }
    for (std::size_t v = 1; v <= V; ++v) {
      seq.push_back(static_cast<Token>(v));
      visit(len);
      seq.pop_back();
    }
  };
  for (std::size_t len = 0; len <= max_len; ++len) visit(len);
  return best;
}

// CTC gradient checked through a row-wise log-softmax, w.r.t. raw logits.
inline GradCheckResult ctc_logit_grad_check(Rng& rng, std::size_t T, std::size_t C,
                                            const TokenSeq& labels) {
  std::vector<double> logits(T * C);
  for (double& v : logits) v = rng.uniform(-2.0, 2.0);
  const VectorLossFn loss = [&](const std::vector<double>& x, std::vector<double>* g) {
    Tensor lp = Tensor::matrix(T, C);
    for (std::size_t t = 0; t < T; ++t)
      log_softmax_into(std::span<const double>(x.data() + t * C, C), lp.row(t));
    const CtcResult r = ctc_loss(lp, labels);
    if (g) {
      std::fill(g->begin(), g->end(), 0.0);
      for (std::size_t t = 0; t < T; ++t)
        log_softmax_backward(lp.row(t), r.grad.row(t), std::span<double>(g->data() + t * C, C));
    }
    return r.nll;
  };
  return grad_check(loss, logits, 1e-5, 1e-6);
}

// Location-aware attention step: parameters, encoder frames, previous weights
// and query all checked against a random linear readout of (weights, context).
inline GradCheckResult attention_step_grad_check(Rng& rng) {
  const std::size_t T = 5, E = 4, Q = 3;
  ParamStore params;
  const LocationAttention att = LocationAttention::create(params, "att", E, Q, 3, 2, 3);
  randomize(params, rng, 0.8);
  const Tensor enc0 = random_matrix(rng, T, E);
  std::vector<double> prev0(T), query0(Q), u(T), v(E);
  for (double& x : prev0) x = rng.uniform(0.1, 1.0);
  const double z = std::accumulate(prev0.begin(), prev0.end(), 0.0);
  for (double& x : prev0) x /= z;
  for (double& x : query0) x = rng.uniform(-1, 1);
  for (double& x : u) x = rng.uniform(-1, 1);
  for (double& x : v) x = rng.uniform(-1, 1);

  auto readout = [&](const AttentionState& s) {
    double l = 0.0;
    for (std::size_t t = 0; t < T; ++t) l += u[t] * s.weights[t];
    for (std::size_t d = 0; d < E; ++d) l += v[d] * s.context[d];
    return l;
  };

  const LossFn param_loss = [&](const ParamStore& p, GradStore* g) {
    const Tensor projected = att.precompute(p, enc0);
    LocationAttention::StepCache cache;
    const AttentionState s = att.step(p, enc0, projected, prev0, query0, &cache);
    if (g) {
      Tensor d_enc = Tensor::matrix(T, E), d_proj = Tensor::matrix(T, att.att_dim());
      att.step_backward(p, enc0, cache, u, v, *g, d_enc, d_proj, {}, {});
      att.precompute_backward(p, enc0, d_proj, *g, d_enc);
    }
    return readout(s);
  };
  GradCheckResult r = grad_check(param_loss, params, 1e-5, 1, 1e-6);

  // Inputs packed as [enc; prev_weights; query].
  std::vector<double> x(enc0.storage());
  x.insert(x.end(), prev0.begin(), prev0.end());
  x.insert(x.end(), query0.begin(), query0.end());
  const VectorLossFn input_loss = [&](const std::vector<double>& xs, std::vector<double>* g) {
    const Tensor enc({T, E}, std::vector<double>(xs.begin(), xs.begin() + T * E));
    const std::vector<double> prev(xs.begin() + T * E, xs.begin() + T * E + T);
    const std::vector<double> query(xs.begin() + T * E + T, xs.end());
    const Tensor projected = att.precompute(params, enc);
    LocationAttention::StepCache cache;
    const AttentionState s = att.step(params, enc, projected, prev, query, &cache);
    if (g) {
      GradStore scratch(params);
      Tensor d_enc = Tensor::matrix(T, E), d_proj = Tensor::matrix(T, att.att_dim());
      std::vector<double> d_prev(T, 0.0), d_query(Q, 0.0);
      att.step_backward(params, enc, cache, u, v, scratch, d_enc, d_proj, d_prev, d_query);
      att.precompute_backward(params, enc, d_proj, scratch, d_enc);
      std::copy(d_enc.storage().begin(), d_enc.storage().end(), g->begin());
      std::copy(d_prev.begin(), d_prev.end(), g->begin() + T * E);
      std::copy(d_query.begin(), d_query.end(), g->begin() + T * E + T);
    }
    return readout(s);
  };
  const GradCheckResult ri = grad_check(input_loss, x, 1e-5, 1e-6);
  r.max_rel_error = std::max(r.max_rel_error, ri.max_rel_error);
  r.max_abs_error = std::max(r.max_abs_error, ri.max_abs_error);
  r.checked += ri.checked;
  return r;
}

// Teacher-forced decoder NLL (state update, output layer, embeddings and the
// attention chain) against its parameters and encoder input.
inline GradCheckResult decoder_grad_check(Rng& rng, AttentionMode mode, AttentionQuery query) {
  const Vocabulary vocab = Vocabulary::with_default_symbols(3);
  const std::size_t T = 4, E = 4;
  DecoderConfig cfg;
  cfg.mode = mode;
  cfg.query = query;
  cfg.attention_dim = 3;
  cfg.conv_channels = 2;
  cfg.conv_kernel = 3;
  cfg.hidden = 4;
  cfg.embed_dim = 3;
  ParamStore params;
  const AttentionDecoder dec(params, cfg, vocab, 2, E);
  randomize(params, rng, 0.6);
  const Tensor enc0 = random_matrix(rng, T, E);
  const TokenSeq ref = random_labels(rng, 3, vocab.num_symbols());
  const std::size_t stream = 1;

  const LossFn param_loss = [&](const ParamStore& p, GradStore* g) {
    const auto run = dec.forward(p, stream, enc0, ref, HistorySource::teacher_forcing());
    if (g) {
      Tensor d_enc = Tensor::matrix(T, E);
      dec.backward(p, enc0, run, 1.0, *g, d_enc);
    }
    return run.nll;
  };
  GradCheckResult r = grad_check(param_loss, params, 1e-5, 1, 1e-6);

  const VectorLossFn input_loss = [&](const std::vector<double>& xs, std::vector<double>* g) {
    const Tensor enc({T, E}, xs);
    const auto run = dec.forward(params, stream, enc, ref, HistorySource::teacher_forcing());
    if (g) {
      GradStore scratch(params);
      Tensor d_enc = Tensor::matrix(T, E);
      dec.backward(params, enc, run, 1.0, scratch, d_enc);
      *g = d_enc.storage();
    }
    return run.nll;
  };
  const GradCheckResult ri = grad_check(input_loss, enc0.storage(), 1e-5, 1e-6);
  r.max_rel_error = std::max(r.max_rel_error, ri.max_rel_error);
  r.max_abs_error = std::max(r.max_abs_error, ri.max_abs_error);
  r.checked += ri.checked;
  return r;
}

// Speaker-parallel copy of a shared-attention model with every attention set
// tied to the shared one.
inline Model tied_parallel(const Model& shared) {
  ModelConfig cfg = shared.config();
  cfg.decoder.mode = AttentionMode::kSpeakerParallel;
  Model par(cfg);
  ParamStore& dst = par.params();
  const ParamStore& src = shared.params();
  for (ParamId id = 0; id < dst.size(); ++id) {
    std::string name = dst.name(id);
    if (name.rfind("att", 0) == 0) name = "att0" + name.substr(name.find('.'));
    dst.value(id) = src.value(*src.find(name));
  }
  return par;
}

// Full multi-task loss on a tiny model, every parameter.
inline GradCheckResult mtl_grad_check(std::uint64_t seed, double lambda,
                                      AttentionMode mode = AttentionMode::kShared) {
  Model model(tiny_model_config(3, 4, mode));
  model.init_uniform(0.5, seed);
  const MixtureSample sample = tiny_sample(model.vocab(), seed + 17);
  const LossFn loss = [&](const ParamStore&, GradStore* g) {
    const MtlResult r = mtl_loss(model, sample, lambda, HistorySource::teacher_forcing(), g);
    require(!r.skipped, ErrorCode::kInternal, "grad check sample is infeasible");
    return r.loss;
  };
  return grad_check(loss, model.params(), 1e-5, 1, 1e-6);
}

}  // namespace mixasr::testing
