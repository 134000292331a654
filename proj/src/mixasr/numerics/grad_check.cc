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

#include "mixasr/numerics/grad_check.h"

#include <algorithm>
#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

namespace {

double checked(double v) {
  require(std::isfinite(v), ErrorCode::kNumeric, "grad_check: non-finite loss");
  return v;
}

void update(GradCheckResult& r, double analytic, double numeric, double floor) {
  const double diff = std::abs(analytic - numeric);
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  r.max_rel_error = std::max(r.max_rel_error, diff / denom);
  r.max_abs_error = std::max(r.max_abs_error, diff);
  ++r.checked;
}

}  // namespace

GradCheckResult grad_check(const LossFn& loss, ParamStore& params,
                           double epsilon, std::size_t stride, double floor) {
  GradStore grads(params);
  checked(loss(params, &grads));
  GradCheckResult result;
  std::size_t flat = 0;
  for (ParamId id = 0; id < params.size(); ++id) {
    Tensor& value = params.value(id);
    for (std::size_t k = 0; k < value.size(); ++k, ++flat) {
      if (stride > 1 && flat % stride != 0) continue;
      const double saved = value[k];
      value[k] = saved + epsilon;
      const double plus = checked(loss(params, nullptr));
      value[k] = saved - epsilon;
      const double minus = checked(loss(params, nullptr));
      value[k] = saved;
      update(result, grads[id][k], (plus - minus) / (2.0 * epsilon), floor);
    }
  }
  return result;
}

GradCheckResult grad_check(const VectorLossFn& loss, std::vector<double> x,
                           double epsilon, double floor) {
  std::vector<double> grad(x.size(), 0.0);
  checked(loss(x, &grad));
  GradCheckResult result;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + epsilon;
    const double plus = checked(loss(x, nullptr));
    x[k] = saved - epsilon;
    const double minus = checked(loss(x, nullptr));
    x[k] = saved;
    update(result, grad[k], (plus - minus) / (2.0 * epsilon), floor);
  }
  return result;
}

}  // namespace mixasr
