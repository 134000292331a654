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

#include "mixasr/attdec/decoder.h"

#include <cmath>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

const char* attention_mode_name(AttentionMode mode) {
  return mode == AttentionMode::kShared ? "shared" : "parallel";
}

AttentionMode parse_attention_mode(const std::string& s) {
  if (s == "shared") return AttentionMode::kShared;
  if (s == "parallel") return AttentionMode::kSpeakerParallel;
  fail(ErrorCode::kInvalidArgument, "attention mode must be shared or parallel, got " + s);
}

const char* attention_query_name(AttentionQuery q) {
  return q == AttentionQuery::kDecoderState ? "state" : "context";
}

AttentionQuery parse_attention_query(const std::string& s) {
  if (s == "state") return AttentionQuery::kDecoderState;
  if (s == "context") return AttentionQuery::kPreviousContext;
  fail(ErrorCode::kInvalidArgument, "attention query must be state or context, got " + s);
}

void DecoderConfig::validate() const {
  require(attention_dim > 0 && conv_channels > 0 && hidden > 0 && embed_dim > 0,
          ErrorCode::kInvalidArgument, "decoder widths must be positive");
  require(conv_kernel % 2 == 1, ErrorCode::kInvalidArgument,
          "attention conv kernel must be odd");
}

Token scheduled_history(Token reference_prev, Token predicted_prev,
                        const SamplingPolicy& policy) {
  require(policy.p >= 0.0 && policy.p <= 1.0, ErrorCode::kInvalidArgument,
          "sampling probability must lie in [0, 1]");
  require(policy.rng != nullptr, ErrorCode::kInvalidArgument,
          "scheduled sampling needs a random generator");
  const bool use_prediction = policy.rng->bernoulli(policy.p);
  return use_prediction ? predicted_prev : reference_prev;
}

AttentionDecoder::AttentionDecoder(ParamStore& params, const DecoderConfig& config,
                                   const Vocabulary& vocab, std::size_t n_streams,
                                   std::size_t enc_dim)
    : config_(config), vocab_(vocab), n_streams_(n_streams), enc_dim_(enc_dim) {
  config_.validate();
  const std::size_t query_dim =
      config_.query == AttentionQuery::kDecoderState ? config_.hidden : enc_dim;
  const std::size_t sets = config_.mode == AttentionMode::kShared ? 1 : n_streams;
  for (std::size_t s = 0; s < sets; ++s)
    attention_.push_back(LocationAttention::create(
        params, "att" + std::to_string(s), enc_dim, query_dim, config_.attention_dim,
        config_.conv_channels, config_.conv_kernel));
  embed_ = params.add("dec.embed", {vocab_.size(), config_.embed_dim});
  lstm_ = LstmCell::create(params, "dec.lstm", enc_dim + config_.embed_dim, config_.hidden);
  output_ = Linear::create(params, "dec.out", config_.hidden + enc_dim + config_.embed_dim,
                           vocab_.att_classes());
}

const LocationAttention& AttentionDecoder::attention_for(std::size_t stream) const {
  require(stream < n_streams_, ErrorCode::kInvalidArgument,
          "stream index " + std::to_string(stream) + " out of range");
  return config_.mode == AttentionMode::kShared ? attention_[0] : attention_[stream];
}

StepState AttentionDecoder::initial_state(std::size_t frames) const {
  require(frames > 0, ErrorCode::kInvalidArgument, "decoder needs a non-empty stream");
  StepState s;
  s.dec.h.assign(config_.hidden, 0.0);
  s.dec.c.assign(config_.hidden, 0.0);
  s.att.weights.assign(frames, 1.0 / static_cast<double>(frames));
  s.att.context.assign(enc_dim_, 0.0);
  s.prev = vocab_.sos();
  return s;
}

Tensor AttentionDecoder::precompute(const ParamStore& params, std::size_t stream,
                                    const Tensor& enc) const {
  return attention_for(stream).precompute(params, enc);
}

void AttentionDecoder::check_history_token(Token t) const {
  require(vocab_.is_symbol(t) || t == vocab_.sos() || t == vocab_.eos(),
          ErrorCode::kInvalidArgument,
          "token " + std::to_string(t) + " cannot be used as decoder history");
}

std::span<const double> AttentionDecoder::embedding(const ParamStore& params, Token t) const {
  return params.value(embed_).row(static_cast<std::size_t>(t));
}

AttentionState AttentionDecoder::attention_step(const ParamStore& params, std::size_t stream,
                                                const Tensor& enc, const Tensor& projected,
                                                const StepState& prev,
                                                LocationAttention::StepCache* cache) const {
  const auto& query =
      config_.query == AttentionQuery::kDecoderState ? prev.dec.h : prev.att.context;
  return attention_for(stream).step(params, enc, projected, prev.att.weights, query, cache);
}

DecoderState AttentionDecoder::decoder_update(const ParamStore& params,
                                              const DecoderState& prev,
                                              std::span<const double> prev_context,
                                              Token prev_token, LstmCell::Cache* cache) const {
  check_history_token(prev_token);
  require(prev_context.size() == enc_dim_, ErrorCode::kShapeMismatch,
          "decoder update: context width mismatch");
  std::vector<double> x(enc_dim_ + config_.embed_dim);
  std::copy(prev_context.begin(), prev_context.end(), x.begin());
  const auto emb = embedding(params, prev_token);
  std::copy(emb.begin(), emb.end(), x.begin() + static_cast<std::ptrdiff_t>(enc_dim_));
  DecoderState next;
  next.h.resize(config_.hidden);
  next.c.resize(config_.hidden);
  LstmCell::Cache local;
  lstm_.forward(params, x, prev.h, prev.c, next.h, next.c, cache ? *cache : local);
  return next;
}

std::vector<double> AttentionDecoder::output_dist(const ParamStore& params,
                                                  std::span<const double> context,
                                                  const DecoderState& state, Token prev_token,
                                                  std::vector<double>* out_input) const {
  check_history_token(prev_token);
  std::vector<double> in;
  in.reserve(output_.in);
  in.insert(in.end(), state.h.begin(), state.h.end());
  in.insert(in.end(), context.begin(), context.end());
  const auto emb = embedding(params, prev_token);
  in.insert(in.end(), emb.begin(), emb.end());
  std::vector<double> logits(output_.out);
  output_.forward(params, in, logits);
  if (out_input) *out_input = std::move(in);
  return log_softmax(logits);
}

std::vector<double> AttentionDecoder::advance(const ParamStore& params, std::size_t stream,
                                              const Tensor& enc, const Tensor& projected,
                                              StepState& state, StepRecord* record) const {
  check_history_token(state.prev);
  AttentionState att = attention_step(params, stream, enc, projected, state,
                                      record ? &record->att : nullptr);
  DecoderState dec = decoder_update(params, state.dec, state.att.context, state.prev,
                                    record ? &record->lstm : nullptr);
  std::vector<double> logp =
      output_dist(params, att.context, dec, state.prev, record ? &record->out_input : nullptr);
  state.dec = std::move(dec);
  state.att = std::move(att);
  if (record) {
    record->history = state.prev;
    record->logprobs = logp;
  }
  return logp;
}

AttentionDecoder::Run AttentionDecoder::forward(const ParamStore& params, std::size_t stream,
                                                const Tensor& enc, const TokenSeq& reference,
                                                const HistorySource& history) const {
  require(!reference.empty(), ErrorCode::kInvalidArgument, "empty reference sequence");
  const std::size_t steps = reference.size() + 1;
  if (history.kind == HistorySource::Kind::kFixed)
    require(history.fixed && history.fixed->size() + 1 >= steps, ErrorCode::kInvalidArgument,
            "fixed history is shorter than the reference");

  Run run;
  run.stream = stream;
  run.projected = precompute(params, stream, enc);
  run.steps.resize(steps);
  run.attention = Tensor::matrix(steps, enc.rows());
  StepState state = initial_state(enc.rows());
  Token predicted = vocab_.sos();
  for (std::size_t n = 0; n < steps; ++n) {
    if (n > 0) {
      switch (history.kind) {
        case HistorySource::Kind::kTeacherForcing:
          state.prev = reference[n - 1];
          break;
        case HistorySource::Kind::kScheduled:
          state.prev = scheduled_history(reference[n - 1], predicted, history.policy);
          break;
        case HistorySource::Kind::kFixed:
          state.prev = (*history.fixed)[n - 1];
          break;
      }
    }
    StepRecord& rec = run.steps[n];
    rec.target = n < reference.size() ? vocab_.att_class(reference[n])
                                      : vocab_.att_class(vocab_.eos());
    const auto logp = advance(params, stream, enc, run.projected, state, &rec);
    run.nll -= logp[rec.target];
    predicted = vocab_.att_token(argmax(logp));
    std::copy(state.att.weights.begin(), state.att.weights.end(), run.attention.row(n).begin());
  }
  return run;
}

void AttentionDecoder::backward(const ParamStore& params, const Tensor& enc, const Run& run,
                                double scale, GradStore& grads, Tensor& d_enc) const {
  const std::size_t hidden = config_.hidden;
  const std::size_t edim = config_.embed_dim;
  const std::size_t frames = enc.rows();
  const bool state_query = config_.query == AttentionQuery::kDecoderState;
  const LocationAttention& att = attention_for(run.stream);

  std::vector<double> dh(hidden, 0.0), dcell(hidden, 0.0), da(frames, 0.0), dctx(enc_dim_, 0.0);
  std::vector<double> dh_prev(hidden), dcell_prev(hidden), da_prev(frames), dctx_prev(enc_dim_);
  std::vector<double> dlogits(output_.out), dout(output_.in), dx(enc_dim_ + edim);
  std::vector<double> dq(state_query ? hidden : enc_dim_), demb(edim);
  Tensor d_projected = Tensor::matrix(frames, att.att_dim());
  Tensor& dembed = grads[embed_];

  for (std::size_t n = run.steps.size(); n-- > 0;) {
    const StepRecord& rec = run.steps[n];
    for (std::size_t k = 0; k < dlogits.size(); ++k)
      dlogits[k] = scale * (std::exp(rec.logprobs[k]) - (k == rec.target ? 1.0 : 0.0));
    std::fill(dout.begin(), dout.end(), 0.0);
    output_.backward(params, rec.out_input, dlogits, grads, dout);
    for (std::size_t k = 0; k < hidden; ++k) dh[k] += dout[k];
    for (std::size_t k = 0; k < enc_dim_; ++k) dctx[k] += dout[hidden + k];
    for (std::size_t k = 0; k < edim; ++k) demb[k] = dout[hidden + enc_dim_ + k];

    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    std::fill(dcell_prev.begin(), dcell_prev.end(), 0.0);
    lstm_.backward(params, rec.lstm, dh, dcell, grads, dx, dh_prev, dcell_prev);
    for (std::size_t k = 0; k < enc_dim_; ++k) dctx_prev[k] = dx[k];
    for (std::size_t k = 0; k < edim; ++k) demb[k] += dx[enc_dim_ + k];

    std::fill(da_prev.begin(), da_prev.end(), 0.0);
    std::fill(dq.begin(), dq.end(), 0.0);
    att.step_backward(params, enc, rec.att, da, dctx, grads, d_enc, d_projected, da_prev, dq);
    if (state_query) {
      for (std::size_t k = 0; k < hidden; ++k) dh_prev[k] += dq[k];
    } else {
      for (std::size_t k = 0; k < enc_dim_; ++k) dctx_prev[k] += dq[k];
    }
    auto erow = dembed.row(static_cast<std::size_t>(rec.history));
    for (std::size_t k = 0; k < edim; ++k) erow[k] += demb[k];

    dh.swap(dh_prev);
    dcell.swap(dcell_prev);
    da.swap(da_prev);
    dctx.swap(dctx_prev);
  }
  att.precompute_backward(params, enc, d_projected, grads, d_enc);
}

double AttentionDecoder::teacher_forced_nll(const ParamStore& params, std::size_t stream,
                                            const Tensor& enc, const TokenSeq& reference) const {
  return forward(params, stream, enc, reference, HistorySource::teacher_forcing()).nll;
}

}  // namespace mixasr
