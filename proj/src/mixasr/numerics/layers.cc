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

#include "mixasr/numerics/layers.h"

#include <cmath>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

Linear Linear::create(ParamStore& params, const std::string& prefix,
                      std::size_t in, std::size_t out, bool with_bias) {
  Linear l;
  l.in = in;
  l.out = out;
  l.has_bias = with_bias;
  l.weight = params.add(prefix + ".weight", {out, in});
  if (with_bias) l.bias = params.add(prefix + ".bias", {out});
  return l;
}

void Linear::forward(const ParamStore& params, std::span<const double> x,
                     std::span<double> y) const {
  require(x.size() == in && y.size() == out, ErrorCode::kShapeMismatch,
          "linear: input/output size mismatch");
  const Tensor& w = params.value(weight);
  for (std::size_t o = 0; o < out; ++o) {
    const double* wr = w.data() + o * in;
    double acc = has_bias ? params.value(bias)[o] : 0.0;
    for (std::size_t i = 0; i < in; ++i) acc += wr[i] * x[i];
    y[o] = acc;
  }
}

void Linear::backward(const ParamStore& params, std::span<const double> x,
                      std::span<const double> dy, GradStore& grads,
                      std::span<double> dx) const {
  const Tensor& w = params.value(weight);
  Tensor& dw = grads[weight];
  for (std::size_t o = 0; o < out; ++o) {
    const double g = dy[o];
    if (g == 0.0) continue;
    double* dwr = dw.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) dwr[i] += g * x[i];
    if (!dx.empty()) {
      const double* wr = w.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) dx[i] += g * wr[i];
    }
  }
  if (has_bias) {
    Tensor& db = grads[bias];
    for (std::size_t o = 0; o < out; ++o) db[o] += dy[o];
  }
}

LstmCell LstmCell::create(ParamStore& params, const std::string& prefix,
                          std::size_t in, std::size_t hidden) {
  LstmCell cell;
  cell.in = in;
  cell.hidden = hidden;
  cell.weight = params.add(prefix + ".weight", {4 * hidden, in + hidden});
  cell.bias = params.add(prefix + ".bias", {4 * hidden});
  return cell;
}

void LstmCell::set_forget_bias(ParamStore& params, double value) const {
  Tensor& b = params.value(bias);
  for (std::size_t k = 0; k < hidden; ++k) b[hidden + k] = value;
}

void LstmCell::forward(const ParamStore& params, std::span<const double> x,
                       std::span<const double> h_prev,
                       std::span<const double> c_prev, std::span<double> h,
                       std::span<double> c, Cache& cache) const {
  require(x.size() == in && h_prev.size() == hidden, ErrorCode::kShapeMismatch,
          "lstm: input/state size mismatch");
  const std::size_t width = in + hidden;
  cache.z.resize(width);
  std::copy(x.begin(), x.end(), cache.z.begin());
  std::copy(h_prev.begin(), h_prev.end(), cache.z.begin() + in);
  cache.c_prev.assign(c_prev.begin(), c_prev.end());
  cache.gates.resize(4 * hidden);
  cache.tanh_c.resize(hidden);

  const Tensor& w = params.value(weight);
  const Tensor& b = params.value(bias);
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double* wr = w.data() + r * width;
    double acc = b[r];
    for (std::size_t i = 0; i < width; ++i) acc += wr[i] * cache.z[i];
    cache.gates[r] = (r >= 2 * hidden && r < 3 * hidden) ? std::tanh(acc) : sigmoid(acc);
  }
  for (std::size_t k = 0; k < hidden; ++k) {
    const double ig = cache.gates[k];
    const double fg = cache.gates[hidden + k];
    const double gg = cache.gates[2 * hidden + k];
    const double og = cache.gates[3 * hidden + k];
    c[k] = fg * c_prev[k] + ig * gg;
    cache.tanh_c[k] = std::tanh(c[k]);
    h[k] = og * cache.tanh_c[k];
  }
}

void LstmCell::backward(const ParamStore& params, const Cache& cache,
                        std::span<const double> dh, std::span<const double> dc,
                        GradStore& grads, std::span<double> dx,
                        std::span<double> dh_prev,
                        std::span<double> dc_prev) const {
  const std::size_t width = in + hidden;
  std::vector<double> dpre(4 * hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    const double ig = cache.gates[k];
    const double fg = cache.gates[hidden + k];
    const double gg = cache.gates[2 * hidden + k];
    const double og = cache.gates[3 * hidden + k];
    const double tc = cache.tanh_c[k];
    const double dhk = dh.empty() ? 0.0 : dh[k];
    double dck = (dc.empty() ? 0.0 : dc[k]) + dhk * og * (1.0 - tc * tc);
    const double d_o = dhk * tc;
    const double d_i = dck * gg;
    const double d_g = dck * ig;
    const double d_f = dck * cache.c_prev[k];
    if (!dc_prev.empty()) dc_prev[k] += dck * fg;
    dpre[k] = d_i * ig * (1.0 - ig);
    dpre[hidden + k] = d_f * fg * (1.0 - fg);
    dpre[2 * hidden + k] = d_g * (1.0 - gg * gg);
    dpre[3 * hidden + k] = d_o * og * (1.0 - og);
  }

  const Tensor& w = params.value(weight);
  Tensor& dw = grads[weight];
  Tensor& db = grads[bias];
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double g = dpre[r];
    db[r] += g;
    if (g == 0.0) continue;
    double* dwr = dw.data() + r * width;
    const double* wr = w.data() + r * width;
    for (std::size_t i = 0; i < width; ++i) dwr[i] += g * cache.z[i];
    if (!dx.empty())
      for (std::size_t i = 0; i < in; ++i) dx[i] += g * wr[i];
    if (!dh_prev.empty())
      for (std::size_t i = 0; i < hidden; ++i) dh_prev[i] += g * wr[in + i];
  }
}

}  // namespace mixasr
