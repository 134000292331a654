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

#include "mixasr/numerics/params.h"

#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

ParamId ParamStore::add(std::string name, std::vector<std::size_t> shape) {
  require(!find(name).has_value(), ErrorCode::kInvalidArgument,
          "duplicate parameter name " + name);
  names_.push_back(std::move(name));
  values_.emplace_back(std::move(shape));
  return values_.size() - 1;
}

std::optional<ParamId> ParamStore::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

GradStore::GradStore(const ParamStore& params) {
  grads_.reserve(params.size());
  for (ParamId i = 0; i < params.size(); ++i)
    grads_.emplace_back(params.value(i).shape());
}

void GradStore::zero() {
  for (auto& g : grads_) g.fill(0.0);
}

void GradStore::add(const GradStore& other, double scale) {
  require(other.size() == size(), ErrorCode::kShapeMismatch,
          "gradient stores have different parameter counts");
  for (std::size_t i = 0; i < grads_.size(); ++i) {
    auto dst = grads_[i].values();
    auto src = other.grads_[i].values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += scale * src[k];
  }
}

void GradStore::scale(double s) {
  for (auto& g : grads_)
    for (double& v : g.values()) v *= s;
}

double GradStore::global_norm() const {
  double sq = 0.0;
  for (const auto& g : grads_)
    for (double v : g.values()) sq += v * v;
  return std::sqrt(sq);
}

bool GradStore::all_finite() const {
  for (const auto& g : grads_)
    if (!g.all_finite()) return false;
  return true;
}

}  // namespace mixasr
