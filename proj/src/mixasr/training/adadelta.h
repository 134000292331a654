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

#include "mixasr/numerics/params.h"

namespace mixasr {

struct AdaDeltaConfig {
  double rho = 0.95;
  double eps = 1e-8;
  void validate() const;
  friend bool operator==(const AdaDeltaConfig&, const AdaDeltaConfig&) = default;
};

// AdaDelta (Zeiler 2012):
//   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
//   delta    = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) delta^2
//   x       <- x + delta
class AdaDelta {
 public:
  AdaDelta(const ParamStore& params, const AdaDeltaConfig& config);

  // Rejects (returns false, state untouched) when any gradient is non-finite.
  bool step(ParamStore& params, const GradStore& grads);

  const GradStore& mean_sq_grad() const { return sq_grad_; }
  const GradStore& mean_sq_update() const { return sq_update_; }

 private:
  AdaDeltaConfig config_;
  GradStore sq_grad_;
  GradStore sq_update_;
};

}  // namespace mixasr
