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

#include <filesystem>
#include <vector>

#include "mixasr/data/vocab.h"
#include "mixasr/numerics/layers.h"

namespace mixasr {

struct LmConfig {
  std::size_t embed_dim = 16;
  std::size_t hidden = 32;
  std::size_t epochs = 30;
  std::size_t batch_size = 8;
  double init_range = 0.1;
  std::uint64_t seed = 7;
  friend bool operator==(const LmConfig&, const LmConfig&) = default;
};

// Single-layer LSTM language model over the symbol vocabulary. Inputs are
// symbols or sos; outputs are attention classes (symbols + eos), so its scores
// line up with the attention decoder's for shallow fusion.
class TinyLm {
 public:
  struct State {
    std::vector<double> h;
    std::vector<double> c;
  };

  TinyLm() = default;
  TinyLm(const Vocabulary& vocab, const LmConfig& config);

  const Vocabulary& vocab() const { return vocab_; }
  const LmConfig& config() const { return config_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  State initial_state() const;
  // Feeds `token` and returns log-probabilities of the next output class.
  std::vector<double> lm_step(State& state, Token token) const;

  // log p(seq, eos | sos).
  double sequence_logprob(const TokenSeq& seq) const;
  // -log p(seq, eos | sos); accumulates gradients when grads is non-null.
  double nll(const TokenSeq& seq, GradStore* grads) const;

  void init_uniform(double range, std::uint64_t seed);
  void save(const std::filesystem::path& path) const;
  static TinyLm load(const std::filesystem::path& path);

 private:
  Vocabulary vocab_;
  LmConfig config_;
  ParamStore params_;
  ParamId embed_ = 0;
  LstmCell lstm_;
  Linear output_;
};

// Trains with AdaDelta on per-token-normalized minibatches; deterministic
// under config.seed.
TinyLm train_lm(const std::vector<TokenSeq>& transcripts, const Vocabulary& vocab,
                const LmConfig& config);

// exp of the mean per-token negative log-likelihood (eos counted as a token).
double lm_perplexity(const TinyLm& lm, const std::vector<TokenSeq>& transcripts);

}  // namespace mixasr
