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

#include <span>
#include <string>
#include <vector>

#include "mixasr/numerics/layers.h"
#include "mixasr/numerics/tensor.h"

namespace mixasr {

struct AttentionState {
  std::vector<double> weights;  // over the T' encoder frames, sums to 1
  std::vector<double> context;  // sum_t weights[t] * G[t]
};

// Location-aware additive attention:
//   f_t   = conv(a_prev)_t                       (channels x kernel filters)
//   e_t   = w . tanh(W_enc G_t + b + W_q q + W_loc f_t)
//   a     = softmax(e),  c = sum_t a_t G_t
// The query q is whatever the decoder feeds in (previous state or previous
// context, see AttentionQuery).
struct LocationAttention {
  Linear enc_proj;    // enc_dim -> att_dim, with bias
  Linear query_proj;  // query_dim -> att_dim
  Linear loc_proj;    // channels -> att_dim
  ParamId conv = 0;   // channels x kernel
  ParamId score = 0;  // att_dim
  std::size_t kernel = 0;
  std::size_t channels = 0;

  struct StepCache {
    std::vector<double> query;
    std::vector<double> prev_weights;
    Tensor loc;     // T x channels
    Tensor hidden;  // T x att_dim, post-tanh
    std::vector<double> weights;
  };

  static LocationAttention create(ParamStore& params, const std::string& prefix,
                                  std::size_t enc_dim, std::size_t query_dim,
                                  std::size_t att_dim, std::size_t channels,
                                  std::size_t kernel);

  std::size_t att_dim() const { return enc_proj.out; }

  // W_enc G + b for every frame; reused across decoder steps.
  Tensor precompute(const ParamStore& params, const Tensor& enc) const;
  void precompute_backward(const ParamStore& params, const Tensor& enc,
                           const Tensor& d_projected, GradStore& grads,
                           Tensor& d_enc) const;

  AttentionState step(const ParamStore& params, const Tensor& enc,
                      const Tensor& projected, std::span<const double> prev_weights,
                      std::span<const double> query, StepCache* cache) const;

  // d_weights / d_context are gradients w.r.t. this step's outputs. Results
  // are accumulated into d_enc, d_projected, d_prev_weights and d_query.
  void step_backward(const ParamStore& params, const Tensor& enc,
                     const StepCache& cache, std::span<const double> d_weights,
                     std::span<const double> d_context, GradStore& grads,
                     Tensor& d_enc, Tensor& d_projected,
                     std::span<double> d_prev_weights,
                     std::span<double> d_query) const;
};

}  // namespace mixasr
