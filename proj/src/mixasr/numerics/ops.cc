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

#include "mixasr/numerics/ops.h"

#include <algorithm>
#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

void softmax_into(std::span<const double> v, std::span<double> out) {
  require(!v.empty(), ErrorCode::kInvalidArgument, "softmax of empty vector");
  const double m = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    z += out[i];
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] /= z;
}

std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  softmax_into(v, out);
  return out;
}

void log_softmax_into(std::span<const double> v, std::span<double> out) {
  const double lse = logsumexp(v);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lse;
}

std::vector<double> log_softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  log_softmax_into(v, out);
  return out;
}

double logsumexp(std::span<const double> v) {
  require(!v.empty(), ErrorCode::kInvalidArgument, "logsumexp of empty vector");
  const double m = *std::max_element(v.begin(), v.end());
  if (m == kLogZero) return kLogZero;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void softmax_backward(std::span<const double> y, std::span<const double> dy,
                      std::span<double> dx) {
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * dy[i];
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] += y[i] * (dy[i] - dot);
}

void log_softmax_backward(std::span<const double> logp, std::span<const double> dy,
                          std::span<double> dx) {
  double sum = 0.0;
  for (double g : dy) sum += g;
  for (std::size_t i = 0; i < logp.size(); ++i)
    dx[i] += dy[i] - std::exp(logp[i]) * sum;
}

double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::span<double> dlogits) {
  require(target < logits.size(), ErrorCode::kInvalidArgument,
          "cross-entropy target out of range");
  std::vector<double> p(logits.size());
  softmax_into(logits, p);
  for (std::size_t i = 0; i < p.size(); ++i)
    dlogits[i] += p[i] - (i == target ? 1.0 : 0.0);
  return -(logits[target] - logsumexp(logits));
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace mixasr
