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

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace mixasr {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Stable softmax via max subtraction. Throws kInvalidArgument on empty input.
std::vector<double> softmax(std::span<const double> v);
void softmax_into(std::span<const double> v, std::span<double> out);

std::vector<double> log_softmax(std::span<const double> v);
void log_softmax_into(std::span<const double> v, std::span<double> out);

// ln sum exp(v). -inf entries are allowed; all -inf gives -inf.
double logsumexp(std::span<const double> v);

// ln(e^a + e^b) for possibly -inf arguments.
double log_add(double a, double b);

// Backward of y = softmax(x): dx = y * (dy - <y, dy>). Accumulates into dx.
void softmax_backward(std::span<const double> y, std::span<const double> dy,
                      std::span<double> dx);

// Backward of y = log_softmax(x): dx = dy - softmax(x) * sum(dy).
void log_softmax_backward(std::span<const double> logp, std::span<const double> dy,
                          std::span<double> dx);

// -log softmax(logits)[target]; grad (softmax - onehot) accumulated into dlogits.
double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::span<double> dlogits);

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t argmax(std::span<const double> v);

}  // namespace mixasr
