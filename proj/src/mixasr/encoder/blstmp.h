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

#include <string>
#include <vector>

#include "mixasr/numerics/layers.h"
#include "mixasr/numerics/tensor.h"

namespace mixasr {

// Bidirectional LSTM layer with a tanh-activated linear projection applied to
// the concatenated directions: T x in -> T x out.
struct Blstmp {
  LstmCell forward_cell;
  LstmCell backward_cell;
  Linear projection;

  struct Cache {
    std::vector<LstmCell::Cache> fwd;
    std::vector<LstmCell::Cache> bwd;
    Tensor concat;  // T x 2H
    Tensor output;  // T x out, post-tanh
  };

  static Blstmp create(ParamStore& params, const std::string& prefix,
                       std::size_t in, std::size_t hidden, std::size_t out);

  std::size_t in() const { return forward_cell.in; }
  std::size_t out() const { return projection.out; }

  Tensor forward(const ParamStore& params, const Tensor& x, Cache& cache) const;
  // Returns dL/dx and accumulates parameter gradients.
  Tensor backward(const ParamStore& params, const Cache& cache, const Tensor& dy,
                  GradStore& grads) const;

  void init_forget_bias(ParamStore& params, double value) const {
    forward_cell.set_forget_bias(params, value);
    backward_cell.set_forget_bias(params, value);
  }
};

}  // namespace mixasr
