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

#include "mixasr/attdec/attention.h"

#include <cmath>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

LocationAttention LocationAttention::create(ParamStore& params, const std::string& prefix,
                                            std::size_t enc_dim, std::size_t query_dim,
                                            std::size_t att_dim, std::size_t channels,
                                            std::size_t kernel) {
  require(kernel % 2 == 1, ErrorCode::kInvalidArgument,
          "attention convolution kernel must be odd");
  LocationAttention a;
  a.enc_proj = Linear::create(params, prefix + ".enc", enc_dim, att_dim);
  a.query_proj = Linear::create(params, prefix + ".query", query_dim, att_dim, false);
  a.loc_proj = Linear::create(params, prefix + ".loc", channels, att_dim, false);
  a.conv = params.add(prefix + ".conv", {channels, kernel});
  a.score = params.add(prefix + ".score", {att_dim});
  a.kernel = kernel;
  a.channels = channels;
  return a;
}

Tensor LocationAttention::precompute(const ParamStore& params, const Tensor& enc) const {
  Tensor out = Tensor::matrix(enc.rows(), att_dim());
  for (std::size_t t = 0; t < enc.rows(); ++t) enc_proj.forward(params, enc.row(t), out.row(t));
  return out;
}

void LocationAttention::precompute_backward(const ParamStore& params, const Tensor& enc,
                                            const Tensor& d_projected, GradStore& grads,
                                            Tensor& d_enc) const {
  for (std::size_t t = 0; t < enc.rows(); ++t)
    enc_proj.backward(params, enc.row(t), d_projected.row(t), grads, d_enc.row(t));
}

AttentionState LocationAttention::step(const ParamStore& params, const Tensor& enc,
                                       const Tensor& projected,
                                       std::span<const double> prev_weights,
                                       std::span<const double> query,
                                       StepCache* cache) const {
  const std::size_t frames = enc.rows();
  require(frames > 0, ErrorCode::kInvalidArgument, "attention over an empty stream");
  require(prev_weights.size() == frames, ErrorCode::kShapeMismatch,
          "attention: previous weights do not match the stream length");
  const std::size_t adim = att_dim();
  const std::size_t radius = kernel / 2;
  const Tensor& filt = params.value(conv);
  const Tensor& w = params.value(score);

  std::vector<double> qp(adim);
  query_proj.forward(params, query, qp);

  Tensor loc = Tensor::matrix(frames, channels);
  Tensor hidden = Tensor::matrix(frames, adim);
  std::vector<double> scores(frames), lp(adim);
  for (std::size_t t = 0; t < frames; ++t) {
    auto f = loc.row(t);
    for (std::size_t k = 0; k < channels; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < kernel; ++j) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) -
                                   static_cast<std::ptrdiff_t>(radius);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(frames)) continue;
        acc += filt(k, j) * prev_weights[static_cast<std::size_t>(src)];
      }
      f[k] = acc;
    }
    loc_proj.forward(params, f, lp);
    auto h = hidden.row(t);
    auto e = projected.row(t);
    double s = 0.0;
    for (std::size_t d = 0; d < adim; ++d) {
      h[d] = std::tanh(e[d] + qp[d] + lp[d]);
      s += w[d] * h[d];
    }
    scores[t] = s;
  }

  AttentionState out;
  out.weights = softmax(scores);
  out.context.assign(enc.cols(), 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    auto g = enc.row(t);
    for (std::size_t d = 0; d < enc.cols(); ++d) out.context[d] += out.weights[t] * g[d];
  }
  if (cache) {
    cache->query.assign(query.begin(), query.end());
    cache->prev_weights.assign(prev_weights.begin(), prev_weights.end());
    cache->loc = std::move(loc);
    cache->hidden = std::move(hidden);
    cache->weights = out.weights;
  }
  return out;
}

void LocationAttention::step_backward(const ParamStore& params, const Tensor& enc,
                                      const StepCache& cache,
                                      std::span<const double> d_weights,
                                      std::span<const double> d_context, GradStore& grads,
                                      Tensor& d_enc, Tensor& d_projected,
                                      std::span<double> d_prev_weights,
                                      std::span<double> d_query) const {
  const std::size_t frames = enc.rows();
  const std::size_t adim = att_dim();
  const std::size_t radius = kernel / 2;
  const Tensor& filt = params.value(conv);
  const Tensor& w = params.value(score);
  Tensor& dfilt = grads[conv];
  Tensor& dw = grads[score];

  std::vector<double> dweights(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    auto g = enc.row(t);
    auto dg = d_enc.row(t);
    double dot = 0.0;
    for (std::size_t d = 0; d < enc.cols(); ++d) {
      dg[d] += cache.weights[t] * d_context[d];
      dot += g[d] * d_context[d];
    }
    dweights[t] = dot + (d_weights.empty() ? 0.0 : d_weights[t]);
  }
  std::vector<double> dscores(frames, 0.0);
  softmax_backward(cache.weights, dweights, dscores);

  std::vector<double> dqp(adim, 0.0), du(adim), df(channels);
  for (std::size_t t = 0; t < frames; ++t) {
    auto h = cache.hidden.row(t);
    auto dproj = d_projected.row(t);
    for (std::size_t d = 0; d < adim; ++d) {
      dw[d] += dscores[t] * h[d];
      du[d] = dscores[t] * w[d] * (1.0 - h[d] * h[d]);
      dproj[d] += du[d];
      dqp[d] += du[d];
    }
    std::fill(df.begin(), df.end(), 0.0);
    loc_proj.backward(params, cache.loc.row(t), du, grads, df);
    for (std::size_t k = 0; k < channels; ++k) {
      if (df[k] == 0.0) continue;
      for (std::size_t j = 0; j < kernel; ++j) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) -
                                   static_cast<std::ptrdiff_t>(radius);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(frames)) continue;
        const auto s = static_cast<std::size_t>(src);
        dfilt(k, j) += df[k] * cache.prev_weights[s];
        if (!d_prev_weights.empty()) d_prev_weights[s] += df[k] * filt(k, j);
      }
    }
  }
  query_proj.backward(params, cache.query, dqp, grads, d_query);
}

}  // namespace mixasr
