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

#include "mixasr/ctc/ctc.h"
#include "mixasr/data/corpus.h"
#include "mixasr/training/model.h"

namespace mixasr {

struct MtlResult {
  bool skipped = false;  // no permutation was CTC-feasible
  double loss = 0.0;     // lambda * ctc + (1 - lambda) * att
  double ctc = 0.0;      // sum over streams under the chosen permutation
  double att = 0.0;
  LossMatrix ctc_matrix;
  Permutation permutation;
  std::vector<TokenSeq> histories;  // tokens fed to the decoder, per stream
};

// Multi-task objective for one mixture:
//   1. encode into S streams and compute the S x S CTC loss matrix,
//   2. pick the assignment minimizing total CTC loss (held constant),
//   3. CTC and attention losses for every stream against its assigned reference,
//   4. combine with weight lambda on CTC.
// When `grads` is non-null the gradient of `loss * grad_scale` is accumulated.
MtlResult mtl_loss(const Model& model, const MixtureSample& sample, double lambda,
                   const HistorySource& history, GradStore* grads,
                   double grad_scale = 1.0);

}  // namespace mixasr
