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

#include "mixasr/encoder/encoder.h"

#include "mixasr/error.h"

namespace mixasr {

void EncoderConfig::validate() const {
  require(n_streams >= 2, ErrorCode::kInvalidArgument, "encoder needs at least 2 streams");
  require(input_dim >= 1 && hidden >= 1 && projection >= 1, ErrorCode::kInvalidArgument,
          "encoder widths must be positive");
  require(subsample >= 1, ErrorCode::kInvalidArgument, "subsample factor must be >= 1");
}

Encoder::Encoder(ParamStore& params, const EncoderConfig& config) : config_(config) {
  config_.validate();
  const auto p = config_.projection;
  mix_ = Blstmp::create(params, "enc.mix", config_.input_dim, config_.hidden, p);
  for (std::size_t s = 0; s < config_.n_streams; ++s)
    sd_.push_back(Blstmp::create(params, "enc.sd" + std::to_string(s), p, config_.hidden, p));
  rec_ = Blstmp::create(params, "enc.rec", p, config_.hidden, p);
}

Tensor Encoder::encode_mix(const ParamStore& params, const Tensor& features,
                           Cache& cache) const {
  require(features.rank() == 2 && features.cols() == config_.input_dim,
          ErrorCode::kShapeMismatch,
          "encoder expects T x " + std::to_string(config_.input_dim) + " features, got " +
              features.shape_string());
  cache.input_frames = features.rows();
  const Tensor full = mix_.forward(params, features, cache.mix);
  const std::size_t kept = config_.output_frames(features.rows());
  Tensor h = Tensor::matrix(kept, full.cols());
  for (std::size_t t = 0; t < kept; ++t) {
    auto src = full.row(t * config_.subsample);
    std::copy(src.begin(), src.end(), h.row(t).begin());
  }
  return h;
}

Tensor Encoder::encode_sd(const ParamStore& params, const Tensor& mixture,
                          std::size_t stream, Cache& cache) const {
  require(stream < sd_.size(), ErrorCode::kInvalidArgument,
          "stream index " + std::to_string(stream) + " out of range");
  if (cache.sd.size() < sd_.size()) cache.sd.resize(sd_.size());
  return sd_[stream].forward(params, mixture, cache.sd[stream]);
}

Tensor Encoder::encode_rec(const ParamStore& params, const Tensor& separated,
                           std::size_t stream, Cache& cache) const {
  require(stream < sd_.size(), ErrorCode::kInvalidArgument,
          "stream index " + std::to_string(stream) + " out of range");
  if (cache.rec.size() < sd_.size()) cache.rec.resize(sd_.size());
  return rec_.forward(params, separated, cache.rec[stream]);
}

StreamSet Encoder::encode(const ParamStore& params, const Tensor& features,
                          Cache& cache) const {
  StreamSet out;
  out.mixture = encode_mix(params, features, cache);
  for (std::size_t s = 0; s < config_.n_streams; ++s) {
    const Tensor hs = encode_sd(params, out.mixture, s, cache);
    out.streams.push_back(encode_rec(params, hs, s, cache));
  }
  return out;
}

StreamSet Encoder::encode(const ParamStore& params, const Tensor& features) const {
  Cache cache;
  return encode(params, features, cache);
}

void Encoder::backward(const ParamStore& params, const Cache& cache,
                       const std::vector<Tensor>& dstreams, GradStore& grads) const {
  require(dstreams.size() == config_.n_streams, ErrorCode::kShapeMismatch,
          "encoder backward: one gradient per stream expected");
  Tensor dmix;
  for (std::size_t s = 0; s < config_.n_streams; ++s) {
    const Tensor dsep = rec_.backward(params, cache.rec[s], dstreams[s], grads);
    const Tensor dh = sd_[s].backward(params, cache.sd[s], dsep, grads);
    if (s == 0) {
      dmix = dh;
    } else {
      for (std::size_t i = 0; i < dh.size(); ++i) dmix[i] += dh[i];
    }
  }
  Tensor dfull = Tensor::matrix(cache.input_frames, config_.projection);
  for (std::size_t t = 0; t < dmix.rows(); ++t) {
    auto src = dmix.row(t);
    std::copy(src.begin(), src.end(), dfull.row(t * config_.subsample).begin());
  }
  mix_.backward(params, cache.mix, dfull, grads);
}

void Encoder::init_forget_bias(ParamStore& params, double value) const {
  mix_.init_forget_bias(params, value);
  for (const auto& b : sd_) b.init_forget_bias(params, value);
  rec_.init_forget_bias(params, value);
}

}  // namespace mixasr
