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
#include <optional>
#include <string>
#include <vector>

#include "mixasr/numerics/tensor.h"

namespace mixasr {

using ParamId = std::size_t;

// Named trainable tensors in registration order. Registration order is the
// canonical order for serialization, initialization and optimizer updates.
class ParamStore {
 public:
  ParamId add(std::string name, std::vector<std::size_t> shape);

  std::size_t size() const { return values_.size(); }
  Tensor& value(ParamId id) { return values_.at(id); }
  const Tensor& value(ParamId id) const { return values_.at(id); }
  const std::string& name(ParamId id) const { return names_.at(id); }
  std::optional<ParamId> find(const std::string& name) const;
  std::size_t num_scalars() const;

  friend bool operator==(const ParamStore& a, const ParamStore& b) {
    return a.names_ == b.names_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
};

// Per-parameter gradient accumulators, shaped like a ParamStore. Workers own
// one each; merging is plain summation in a fixed order.
class GradStore {
 public:
  GradStore() = default;
  explicit GradStore(const ParamStore& params);

  std::size_t size() const { return grads_.size(); }
  Tensor& operator[](ParamId id) { return grads_.at(id); }
  const Tensor& operator[](ParamId id) const { return grads_.at(id); }

  void zero();
  void add(const GradStore& other, double scale = 1.0);
  void scale(double s);
  double global_norm() const;
  bool all_finite() const;

 private:
  std::vector<Tensor> grads_;
};

}  // namespace mixasr
