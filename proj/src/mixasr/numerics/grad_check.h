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

#include <functional>
#include <vector>

#include "mixasr/numerics/params.h"

namespace mixasr {

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
};

// Loss callback: returns the scalar loss and, when grads is non-null,
// accumulates the analytic gradient into it.
using LossFn = std::function<double(const ParamStore&, GradStore*)>;

// Central-difference check of every scalar in `params` (or a strided subset
// when `stride` > 1). Relative error per entry is
// |a - n| / max(|a|, |n|, floor). Throws kNumeric on a non-finite loss.
GradCheckResult grad_check(const LossFn& loss, ParamStore& params,
                           double epsilon = 1e-5, std::size_t stride = 1,
                           double floor = 1e-8);

// Same check for a plain function of a vector.
using VectorLossFn =
    std::function<double(const std::vector<double>&, std::vector<double>*)>;
GradCheckResult grad_check(const VectorLossFn& loss, std::vector<double> x,
                           double epsilon = 1e-5, double floor = 1e-8);

}  // namespace mixasr
