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

#include "mixasr/ctc/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_labels(const Tensor& logprobs, const TokenSeq& labels) {
  require(logprobs.rank() == 2, ErrorCode::kShapeMismatch, "ctc: logprobs must be T x C");
  for (Token t : labels)
    require(t > 0 && static_cast<std::size_t>(t) < logprobs.cols(),
            ErrorCode::kInvalidArgument,
            "ctc: label " + std::to_string(t) + " is blank or out of range");
}

}  // namespace

std::size_t ctc_min_frames(const TokenSeq& labels) {
  std::size_t n = labels.size();
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;
  return n;
}

CtcResult ctc_loss(const Tensor& logprobs, const TokenSeq& labels) {
  check_labels(logprobs, labels);
  const std::size_t frames = logprobs.rows();
  const std::size_t classes = logprobs.cols();
  CtcResult result;
  result.grad = Tensor::matrix(frames, classes);
  if (frames < ctc_min_frames(labels)) {
    result.nll = kInf;
    return result;
  }
  if (frames == 0) {
    result.nll = 0.0;  // the empty path emits the empty sequence
    return result;
  }

  const std::size_t ext = 2 * labels.size() + 1;
  std::vector<std::size_t> sym(ext, kCtcBlank);
  for (std::size_t i = 0; i < labels.size(); ++i)
    sym[2 * i + 1] = static_cast<std::size_t>(labels[i]);
  auto can_skip = [&](std::size_t s) {
    return s >= 2 && sym[s] != kCtcBlank && sym[s] != sym[s - 2];
  };

  Tensor alpha = Tensor::matrix(frames, ext, kLogZero);
  alpha(0, 0) = logprobs(0, sym[0]);
  if (ext > 1) alpha(0, 1) = logprobs(0, sym[1]);
  for (std::size_t t = 1; t < frames; ++t) {
    for (std::size_t s = 0; s < ext; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = log_add(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = log_add(a, alpha(t - 1, s - 2));
      alpha(t, s) = a == kLogZero ? kLogZero : a + logprobs(t, sym[s]);
    }
  }
  double log_p = alpha(frames - 1, ext - 1);
  if (ext > 1) log_p = log_add(log_p, alpha(frames - 1, ext - 2));
  if (log_p == kLogZero) {
    result.nll = kInf;
    return result;
  }

  Tensor beta = Tensor::matrix(frames, ext, kLogZero);
  beta(frames - 1, ext - 1) = logprobs(frames - 1, sym[ext - 1]);
  if (ext > 1) beta(frames - 1, ext - 2) = logprobs(frames - 1, sym[ext - 2]);
  for (std::size_t t = frames - 1; t-- > 0;) {
    for (std::size_t s = 0; s < ext; ++s) {
      double b = beta(t + 1, s);
      if (s + 1 < ext) b = log_add(b, beta(t + 1, s + 1));
      if (s + 2 < ext && can_skip(s + 2)) b = log_add(b, beta(t + 1, s + 2));
      beta(t, s) = b == kLogZero ? kLogZero : b + logprobs(t, sym[s]);
    }
  }

  // alpha and beta both include the emission at t; remove one copy.
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t s = 0; s < ext; ++s) {
      if (alpha(t, s) == kLogZero || beta(t, s) == kLogZero) continue;
      const double occ = alpha(t, s) + beta(t, s) - logprobs(t, sym[s]) - log_p;
      result.grad(t, sym[s]) -= std::exp(occ);
    }
  }
  result.nll = -log_p;
  return result;
}

double ctc_nll(const Tensor& logprobs, const TokenSeq& labels) {
  return ctc_loss(logprobs, labels).nll;
}

TokenSeq ctc_collapse(const std::vector<std::size_t>& path) {
  TokenSeq out;
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (std::size_t c : path) {
    if (c != prev && c != kCtcBlank) out.push_back(static_cast<Token>(c));
    prev = c;
  }
  return out;
}

double ctc_brute(const Tensor& logprobs, const TokenSeq& labels) {
  check_labels(logprobs, labels);
  const std::size_t frames = logprobs.rows();
  const std::size_t classes = logprobs.cols();
  double paths = 1.0;
  for (std::size_t t = 0; t < frames; ++t) paths *= static_cast<double>(classes);
  require(paths <= 1e6, ErrorCode::kInvalidArgument,
          "ctc_brute: instance has more than 1e6 paths");

  double total = kLogZero;
  std::vector<std::size_t> path(frames, 0);
  while (true) {
    if (ctc_collapse(path) == labels) {
      double lp = 0.0;
      for (std::size_t t = 0; t < frames; ++t) lp += logprobs(t, path[t]);
      total = log_add(total, lp);
    }
    std::size_t t = 0;
    while (t < frames && ++path[t] == classes) path[t++] = 0;
    if (t == frames) break;
  }
  return total == kLogZero ? kInf : -total;
}

TokenSeq ctc_greedy_decode(const Tensor& logprobs) {
  std::vector<std::size_t> path(logprobs.rows());
  for (std::size_t t = 0; t < logprobs.rows(); ++t) path[t] = argmax(logprobs.row(t));
  return ctc_collapse(path);
}

Permutation pit_assign(const LossMatrix& matrix) {
  require(matrix.rank() == 2 && matrix.rows() == matrix.cols(), ErrorCode::kInvalidArgument,
          "pit_assign: loss matrix must be square, got " + matrix.shape_string());
  const std::size_t n = matrix.rows();
  require(n >= 1 && n <= 8, ErrorCode::kInvalidArgument,
          "pit_assign: exhaustive search supports 1..8 streams");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Permutation best;
  bool have = false;
  do {
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) total += matrix(s, perm[s]);
    // Strict improvement keeps the first (lexicographically smallest) minimum.
    if (!have || total < best.total) {
      best.assignment = perm;
      best.total = total;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.pair_losses.resize(n);
  for (std::size_t s = 0; s < n; ++s) best.pair_losses[s] = matrix(s, best.assignment[s]);
  return best;
}

}  // namespace mixasr
