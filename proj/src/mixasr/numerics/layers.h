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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mixasr/numerics/params.h"

namespace mixasr {

// y = W x + b, W stored out x in.
struct Linear {
  ParamId weight = 0;
  ParamId bias = 0;
  std::size_t in = 0;
  std::size_t out = 0;
  bool has_bias = true;

  static Linear create(ParamStore& params, const std::string& prefix,
                       std::size_t in, std::size_t out, bool with_bias = true);

  void forward(const ParamStore& params, std::span<const double> x,
               std::span<double> y) const;

  // Accumulates dW, db into grads and W^T dy into dx (skipped when dx is empty).
  void backward(const ParamStore& params, std::span<const double> x,
                std::span<const double> dy, GradStore& grads,
                std::span<double> dx) const;
};

// LSTM cell, gate order (input, forget, candidate, output) stacked in a single
// 4H x (I + H) weight applied to [x; h_prev].
struct LstmCell {
  ParamId weight = 0;
  ParamId bias = 0;
  std::size_t in = 0;
  std::size_t hidden = 0;

  struct Cache {
    std::vector<double> z;      // [x; h_prev]
    std::vector<double> gates;  // activated i, f, g, o
    std::vector<double> c_prev;
    std::vector<double> tanh_c;
  };

  static LstmCell create(ParamStore& params, const std::string& prefix,
                         std::size_t in, std::size_t hidden);

  // Sets the forget-gate slice of the bias to `value`.
  void set_forget_bias(ParamStore& params, double value) const;

  void forward(const ParamStore& params, std::span<const double> x,
               std::span<const double> h_prev, std::span<const double> c_prev,
               std::span<double> h, std::span<double> c, Cache& cache) const;

  // dh and dc are gradients w.r.t. this step's outputs. dx, dh_prev, dc_prev
  // are accumulated (each may be empty to skip).
  void backward(const ParamStore& params, const Cache& cache,
                std::span<const double> dh, std::span<const double> dc,
                GradStore& grads, std::span<double> dx,
                std::span<double> dh_prev, std::span<double> dc_prev) const;
};

}  // namespace mixasr
