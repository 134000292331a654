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
#include <vector>

#include "mixasr/data/vocab.h"
#include "mixasr/numerics/tensor.h"

namespace mixasr {

// CTC class ids coincide with token ids: 0 is blank, 1..V are symbols.
inline constexpr std::size_t kCtcBlank = 0;

struct CtcResult {
  double nll = 0.0;  // +inf when the labels cannot be aligned to the frames
  Tensor grad;       // d nll / d logprobs, T x C; zero when infeasible
};

// Minimum number of frames needed to emit `labels` (one per label plus one
// separating blank per adjacent repeat).
std::size_t ctc_min_frames(const TokenSeq& labels);

// Negative log-likelihood of `labels` given per-frame log-probabilities
// (T x C rows, each a normalized log distribution), via log-space
// forward-backward over the blank-interleaved label sequence.
CtcResult ctc_loss(const Tensor& logprobs, const TokenSeq& labels);
double ctc_nll(const Tensor& logprobs, const TokenSeq& labels);

// Enumerates all C^T frame paths. Throws kInvalidArgument above 1e6 paths.
double ctc_brute(const Tensor& logprobs, const TokenSeq& labels);

// Remove repeats, then blanks.
TokenSeq ctc_collapse(const std::vector<std::size_t>& path);
TokenSeq ctc_greedy_decode(const Tensor& logprobs);

// S x S, entry (s, r) = loss of output stream s against reference r.
using LossMatrix = Tensor;

struct Permutation {
  std::vector<std::size_t> assignment;  // stream s -> reference assignment[s]
  std::vector<double> pair_losses;      // matrix(s, assignment[s])
  double total = 0.0;
};

// Exhaustive argmin over all S! assignments; ties go to the lexicographically
// smallest assignment. Throws kInvalidArgument for non-square or S > 8.
Permutation pit_assign(const LossMatrix& matrix);

}  // namespace mixasr
