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

#include "mixasr/decoding/lm.h"

#include <cmath>
#include <sstream>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"
#include "mixasr/numerics/param_io.h"
#include "mixasr/numerics/rng.h"
#include "mixasr/training/adadelta.h"
#include "mixasr/util/keyvalue.h"

namespace mixasr {

namespace {

constexpr double kClipNorm = 5.0;

struct LmStepCache {
  LstmCell::Cache lstm;
  std::vector<double> h;
  std::vector<double> logprobs;
};

}  // namespace

TinyLm::TinyLm(const Vocabulary& vocab, const LmConfig& config)
    : vocab_(vocab), config_(config) {
  require(vocab.num_symbols() > 0, ErrorCode::kInvalidArgument, "lm: empty vocabulary");
  require(config.embed_dim > 0 && config.hidden > 0, ErrorCode::kInvalidArgument,
          "lm: embed_dim and hidden must be positive");
  embed_ = params_.add("lm.embed", {vocab.size(), config.embed_dim});
  lstm_ = LstmCell::create(params_, "lm.lstm", config.embed_dim, config.hidden);
  output_ = Linear::create(params_, "lm.out", config.hidden, vocab.att_classes());
}

TinyLm::State TinyLm::initial_state() const {
  return {std::vector<double>(config_.hidden, 0.0), std::vector<double>(config_.hidden, 0.0)};
}

std::vector<double> TinyLm::lm_step(State& state, Token token) const {
  require(vocab_.is_symbol(token) || token == vocab_.sos(), ErrorCode::kInvalidArgument,
          "lm_step: token " + std::to_string(token) + " is not a symbol or sos");
  const Tensor& emb = params_.value(embed_);
  std::span<const double> x(emb.data() + static_cast<std::size_t>(token) * config_.embed_dim,
                            config_.embed_dim);
  std::vector<double> h(config_.hidden), c(config_.hidden);
  LstmCell::Cache cache;
  lstm_.forward(params_, x, state.h, state.c, h, c, cache);
  state.h = std::move(h);
  state.c = std::move(c);
  std::vector<double> logits(vocab_.att_classes());
  output_.forward(params_, state.h, logits);
  return log_softmax(logits);
}

double TinyLm::sequence_logprob(const TokenSeq& seq) const {
  return -nll(seq, nullptr);
}

double TinyLm::nll(const TokenSeq& seq, GradStore* grads) const {
  const std::size_t H = config_.hidden;
  const std::size_t E = config_.embed_dim;
  const Tensor& emb = params_.value(embed_);
  std::vector<LmStepCache> steps(seq.size() + 1);
  std::vector<double> h(H, 0.0), c(H, 0.0), h_next(H), c_next(H);
  std::vector<double> logits(vocab_.att_classes());
  double total = 0.0;
  for (std::size_t n = 0; n <= seq.size(); ++n) {
    const Token in = n == 0 ? vocab_.sos() : seq[n - 1];
    require(vocab_.is_symbol(in) || in == vocab_.sos(), ErrorCode::kInvalidArgument,
            "lm: token " + std::to_string(in) + " is not a symbol");
    const std::size_t target = n < seq.size() ? vocab_.att_class(seq[n])
                                              : vocab_.att_class(vocab_.eos());
    std::span<const double> x(emb.data() + static_cast<std::size_t>(in) * E, E);
    lstm_.forward(params_, x, h, c, h_next, c_next, steps[n].lstm);
    h = h_next;
    c = c_next;
    steps[n].h = h;
    output_.forward(params_, h, logits);
    steps[n].logprobs = log_softmax(logits);
    total -= steps[n].logprobs[target];
  }
  if (grads == nullptr) return total;

  std::vector<double> dh(H, 0.0), dc(H, 0.0), dh_prev(H), dc_prev(H);
  std::vector<double> dlogits(vocab_.att_classes()), dx(E);
  Tensor& demb = (*grads)[embed_];
  for (std::size_t n = seq.size() + 1; n-- > 0;) {
    const Token in = n == 0 ? vocab_.sos() : seq[n - 1];
    const std::size_t target = n < seq.size() ? vocab_.att_class(seq[n])
                                              : vocab_.att_class(vocab_.eos());
    for (std::size_t k = 0; k < dlogits.size(); ++k)
      dlogits[k] = std::exp(steps[n].logprobs[k]) - (k == target ? 1.0 : 0.0);
    output_.backward(params_, steps[n].h, dlogits, *grads, dh);
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    std::fill(dc_prev.begin(), dc_prev.end(), 0.0);
    lstm_.backward(params_, steps[n].lstm, dh, dc, *grads, dx, dh_prev, dc_prev);
    double* row = demb.data() + static_cast<std::size_t>(in) * E;
    for (std::size_t e = 0; e < E; ++e) row[e] += dx[e];
    dh.swap(dh_prev);
    dc.swap(dc_prev);
  }
  return total;
}

void TinyLm::init_uniform(double range, std::uint64_t seed) {
  require(range >= 0.0, ErrorCode::kInvalidArgument, "init range must be >= 0");
  Rng rng(seed);
  for (ParamId id = 0; id < params_.size(); ++id)
    for (double& v : params_.value(id).values()) v = rng.uniform(-range, range);
  lstm_.set_forget_bias(params_, 1.0);
}

void TinyLm::save(const std::filesystem::path& path) const {
  KeyValueDoc doc;
  doc.set("lm", "embed_dim", std::to_string(config_.embed_dim));
  doc.set("lm", "hidden", std::to_string(config_.hidden));
  std::string joined;
  for (std::size_t i = 0; i < vocab_.num_symbols(); ++i)
    joined += (i ? " " : "") + vocab_.symbols()[i];
  doc.set("lm", "symbols", joined);
  write_params(path, doc.serialize(), params_);
}

TinyLm TinyLm::load(const std::filesystem::path& path) {
  ParamContainer c = read_params(path);
  const KeyValueDoc doc = KeyValueDoc::parse(c.metadata);
  auto need = [&](const std::string& key) {
    const auto v = doc.get("lm", key);
    require(v.has_value(), ErrorCode::kFormat, "lm file missing lm." + key);
    return *v;
  };
  LmConfig config;
  config.embed_dim = parse_uint(need("embed_dim"), "lm.embed_dim");
  config.hidden = parse_uint(need("hidden"), "lm.hidden");
  std::vector<std::string> symbols;
  std::istringstream in(need("symbols"));
  for (std::string s; in >> s;) symbols.push_back(s);
  TinyLm lm(Vocabulary(std::move(symbols)), config);
  assign_params(lm.params_, c.params);
  return lm;
}

TinyLm train_lm(const std::vector<TokenSeq>& transcripts, const Vocabulary& vocab,
                const LmConfig& config) {
  require(!transcripts.empty(), ErrorCode::kInvalidArgument, "train_lm: no transcripts");
  require(config.batch_size > 0, ErrorCode::kInvalidArgument, "train_lm: batch_size must be > 0");
  TinyLm lm(vocab, config);
  lm.init_uniform(config.init_range, derive_seed(config.seed, {0}));
  AdaDelta opt(lm.params(), AdaDeltaConfig{});
  Rng order_rng(derive_seed(config.seed, {1}));
  std::vector<std::size_t> order(transcripts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  GradStore grads(lm.params());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      grads.zero();
      std::size_t tokens = 0;
      for (std::size_t i = start; i < end; ++i) {
        lm.nll(transcripts[order[i]], &grads);
        tokens += transcripts[order[i]].size() + 1;
      }
      grads.scale(1.0 / static_cast<double>(tokens));
      const double norm = grads.global_norm();
      if (norm > kClipNorm) grads.scale(kClipNorm / norm);
      require(opt.step(lm.params(), grads), ErrorCode::kNumeric,
              "train_lm: non-finite gradient");
    }
  }
  return lm;
}

double lm_perplexity(const TinyLm& lm, const std::vector<TokenSeq>& transcripts) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& t : transcripts) {
    total += lm.nll(t, nullptr);
    tokens += t.size() + 1;
  }
  return tokens == 0 ? 1.0 : std::exp(total / static_cast<double>(tokens));
}

}  // namespace mixasr
