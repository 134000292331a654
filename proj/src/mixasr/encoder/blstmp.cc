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

#include "mixasr/encoder/blstmp.h"

#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

Blstmp Blstmp::create(ParamStore& params, const std::string& prefix,
                      std::size_t in, std::size_t hidden, std::size_t out) {
  Blstmp layer;
  layer.forward_cell = LstmCell::create(params, prefix + ".fwd", in, hidden);
  layer.backward_cell = LstmCell::create(params, prefix + ".bwd", in, hidden);
  layer.projection = Linear::create(params, prefix + ".proj", 2 * hidden, out);
  return layer;
}

Tensor Blstmp::forward(const ParamStore& params, const Tensor& x,
                       Cache& cache) const {
  require(x.rank() == 2 && x.cols() == in(), ErrorCode::kShapeMismatch,
          "blstmp: expected T x " + std::to_string(in()) + " input, got " +
              x.shape_string());
  const std::size_t frames = x.rows();
  const std::size_t hidden = forward_cell.hidden;
  cache.fwd.assign(frames, {});
  cache.bwd.assign(frames, {});
  cache.concat = Tensor::matrix(frames, 2 * hidden);

  std::vector<double> h(hidden, 0.0), c(hidden, 0.0), h2(hidden), c2(hidden);
  for (std::size_t t = 0; t < frames; ++t) {
    forward_cell.forward(params, x.row(t), h, c, h2, c2, cache.fwd[t]);
    h.swap(h2);
    c.swap(c2);
    std::copy(h.begin(), h.end(), cache.concat.row(t).begin());
  }
  std::fill(h.begin(), h.end(), 0.0);
  std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t r = frames; r-- > 0;) {
    backward_cell.forward(params, x.row(r), h, c, h2, c2, cache.bwd[r]);
    h.swap(h2);
    c.swap(c2);
    std::copy(h.begin(), h.end(), cache.concat.row(r).begin() + hidden);
  }

  cache.output = Tensor::matrix(frames, out());
  for (std::size_t t = 0; t < frames; ++t) {
    auto y = cache.output.row(t);
    projection.forward(params, cache.concat.row(t), y);
    for (double& v : y) v = std::tanh(v);
  }
  return cache.output;
}

Tensor Blstmp::backward(const ParamStore& params, const Cache& cache,
                        const Tensor& dy, GradStore& grads) const {
  const std::size_t frames = cache.output.rows();
  const std::size_t hidden = forward_cell.hidden;
  Tensor dconcat = Tensor::matrix(frames, 2 * hidden);
  std::vector<double> dpre(out());
  for (std::size_t t = 0; t < frames; ++t) {
    auto y = cache.output.row(t);
    auto g = dy.row(t);
    for (std::size_t k = 0; k < out(); ++k) dpre[k] = g[k] * (1.0 - y[k] * y[k]);
    projection.backward(params, cache.concat.row(t), dpre, grads, dconcat.row(t));
  }

  Tensor dx = Tensor::matrix(frames, in());
  std::vector<double> dh(hidden), dc(hidden), dh_prev(hidden), dc_prev(hidden);
  std::fill(dh.begin(), dh.end(), 0.0);
  std::fill(dc.begin(), dc.end(), 0.0);
  for (std::size_t t = frames; t-- > 0;) {
    auto from_out = dconcat.row(t);
    for (std::size_t k = 0; k < hidden; ++k) dh[k] += from_out[k];
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    std::fill(dc_prev.begin(), dc_prev.end(), 0.0);
    forward_cell.backward(params, cache.fwd[t], dh, dc, grads, dx.row(t), dh_prev, dc_prev);
    dh.swap(dh_prev);
    dc.swap(dc_prev);
  }
  std::fill(dh.begin(), dh.end(), 0.0);
  std::fill(dc.begin(), dc.end(), 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    auto from_out = dconcat.row(t);
    for (std::size_t k = 0; k < hidden; ++k) dh[k] += from_out[hidden + k];
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    std::fill(dc_prev.begin(), dc_prev.end(), 0.0);
    backward_cell.backward(params, cache.bwd[t], dh, dc, grads, dx.row(t), dh_prev, dc_prev);
    dh.swap(dh_prev);
    dc.swap(dc_prev);
  }
  return dx;
}

}  // namespace mixasr
