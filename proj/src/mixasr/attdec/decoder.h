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

#include <optional>
#include <vector>

#include "mixasr/attdec/attention.h"
#include "mixasr/data/vocab.h"
#include "mixasr/numerics/rng.h"

namespace mixasr {

enum class AttentionMode { kShared, kSpeakerParallel };
enum class AttentionQuery { kDecoderState, kPreviousContext };

const char* attention_mode_name(AttentionMode mode);
AttentionMode parse_attention_mode(const std::string& s);
const char* attention_query_name(AttentionQuery q);
AttentionQuery parse_attention_query(const std::string& s);

struct DecoderConfig {
  AttentionMode mode = AttentionMode::kShared;
  AttentionQuery query = AttentionQuery::kDecoderState;
  std::size_t attention_dim = 32;
  std::size_t conv_channels = 8;
  std::size_t conv_kernel = 5;
  std::size_t hidden = 32;
  std::size_t embed_dim = 16;

  void validate() const;
  friend bool operator==(const DecoderConfig&, const DecoderConfig&) = default;
};

struct DecoderState {
  std::vector<double> h;
  std::vector<double> c;
};

// Everything the decoder carries from step n-1 to step n.
struct StepState {
  DecoderState dec;
  AttentionState att;
  Token prev = 0;
};

struct SamplingPolicy {
  double p = 0.0;  // probability of feeding back the model's own prediction
  Rng* rng = nullptr;
};

// Draws b ~ Bernoulli(p); returns reference_prev when b == 0, predicted_prev
// when b == 1. With p == 0 the generator is still advanced once per call.
Token scheduled_history(Token reference_prev, Token predicted_prev,
                        const SamplingPolicy& policy);

// Where each step's history token comes from during a training pass.
struct HistorySource {
  enum class Kind { kTeacherForcing, kScheduled, kFixed };
  Kind kind = Kind::kTeacherForcing;
  SamplingPolicy policy;
  const TokenSeq* fixed = nullptr;  // kFixed: history for steps 2..N+1

  static HistorySource teacher_forcing() { return {}; }
  static HistorySource scheduled(const SamplingPolicy& p) {
    HistorySource h;
    h.kind = Kind::kScheduled;
    h.policy = p;
    return h;
  }
  static HistorySource fixed_tokens(const TokenSeq& tokens) {
    HistorySource h;
    h.kind = Kind::kFixed;
    h.fixed = &tokens;
    return h;
  }
};

// Attention decoder: location-aware attention (one parameter set, or one per
// stream in speaker-parallel mode), a shared LSTM state update and a shared
// output layer over symbols + eos.
//
// Step n, given (e_{n-1}, a_{n-1}, c_{n-1}, y_{n-1}):
//   a_n, c_n = Attention^s(a_{n-1}, q, G^s)   q = e_{n-1} or c_{n-1}
//   e_n      = LSTM(e_{n-1}, [c_{n-1}; emb(y_{n-1})])
//   log p    = log_softmax(W [e_n; c_n; emb(y_{n-1})] + b)
class AttentionDecoder {
 public:
  struct StepRecord {
    Token history = 0;         // y_{n-1} actually fed in
    std::size_t target = 0;    // attention class of r_n (or eos)
    LocationAttention::StepCache att;
    LstmCell::Cache lstm;
    std::vector<double> out_input;
    std::vector<double> logprobs;
  };

  struct Run {
    std::size_t stream = 0;
    Tensor projected;  // attention's W_enc G + b
    std::vector<StepRecord> steps;
    double nll = 0.0;
    Tensor attention;  // N x T' weights
  };

  AttentionDecoder() = default;
  AttentionDecoder(ParamStore& params, const DecoderConfig& config, const Vocabulary& vocab,
                   std::size_t n_streams, std::size_t enc_dim);

  const DecoderConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t num_attention_sets() const { return attention_.size(); }
  const LocationAttention& attention_for(std::size_t stream) const;

  StepState initial_state(std::size_t frames) const;
  Tensor precompute(const ParamStore& params, std::size_t stream, const Tensor& enc) const;

  // One attention step (Attention / Attention^s).
  AttentionState attention_step(const ParamStore& params, std::size_t stream,
                                const Tensor& enc, const Tensor& projected,
                                const StepState& prev,
                                LocationAttention::StepCache* cache = nullptr) const;

  // One state update: e_n from (e_{n-1}, c_{n-1}, y_{n-1}).
  DecoderState decoder_update(const ParamStore& params, const DecoderState& prev,
                              std::span<const double> prev_context, Token prev_token,
                              LstmCell::Cache* cache = nullptr) const;

  // Log-probabilities over attention classes.
  std::vector<double> output_dist(const ParamStore& params, std::span<const double> context,
                                  const DecoderState& state, Token prev_token,
                                  std::vector<double>* out_input = nullptr) const;

  // Full step used by both training and search: reads state.prev as the
  // history token and advances `state` to step n.
  std::vector<double> advance(const ParamStore& params, std::size_t stream, const Tensor& enc,
                              const Tensor& projected, StepState& state,
                              StepRecord* record = nullptr) const;

  // Runs reference + eos through the decoder and sums -log p(target).
  Run forward(const ParamStore& params, std::size_t stream, const Tensor& enc,
              const TokenSeq& reference, const HistorySource& history) const;
  // Scales every step's gradient by `scale`; accumulates into grads and d_enc.
  void backward(const ParamStore& params, const Tensor& enc, const Run& run, double scale,
                GradStore& grads, Tensor& d_enc) const;

  double teacher_forced_nll(const ParamStore& params, std::size_t stream, const Tensor& enc,
                            const TokenSeq& reference) const;

  void init_forget_bias(ParamStore& params, double value) const {
    lstm_.set_forget_bias(params, value);
  }

 private:
  std::span<const double> embedding(const ParamStore& params, Token t) const;
  void check_history_token(Token t) const;

  DecoderConfig config_;
  Vocabulary vocab_;
  std::size_t n_streams_ = 0;
  std::size_t enc_dim_ = 0;
  std::vector<LocationAttention> attention_;
  ParamId embed_ = 0;  // vocab.size() x embed_dim, indexed by token id
  LstmCell lstm_;
  Linear output_;
};

}  // namespace mixasr
