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

#include "mixasr/training/adadelta.h"

#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

void AdaDeltaConfig::validate() const {
  require(rho > 0.0 && rho < 1.0, ErrorCode::kInvalidArgument, "adadelta rho must lie in (0, 1)");
  require(eps > 0.0, ErrorCode::kInvalidArgument, "adadelta eps must be positive");
}

AdaDelta::AdaDelta(const ParamStore& params, const AdaDeltaConfig& config)
    : config_(config), sq_grad_(params), sq_update_(params) {
  config_.validate();
}

bool AdaDelta::step(ParamStore& params, const GradStore& grads) {
  if (!grads.all_finite()) return false;
  const double rho = config_.rho;
  const double eps = config_.eps;
  for (ParamId id = 0; id < params.size(); ++id) {
    auto x = params.value(id).values();
    auto g = grads[id].values();
    auto eg = sq_grad_[id].values();
    auto ed = sq_update_[id].values();
    for (std::size_t k = 0; k < x.size(); ++k) {
      eg[k] = rho * eg[k] + (1.0 - rho) * g[k] * g[k];
      const double delta = -std::sqrt(ed[k] + eps) / std::sqrt(eg[k] + eps) * g[k];
      ed[k] = rho * ed[k] + (1.0 - rho) * delta * delta;
      x[k] += delta;
    }
  }
  return true;
}

}  // namespace mixasr
