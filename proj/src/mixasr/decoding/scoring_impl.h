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

#include <algorithm>
#include <numeric>

#include "mixasr/error.h"

namespace mixasr {

template <typename T>
EditCounts edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});

  EditCounts c;
  c.distance = at(n, m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0u : 1u)) {
        if (!same) ++c.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

template <typename T>
PermutationScore score_permutation_min(const std::vector<std::vector<T>>& hyps,
                                       const std::vector<std::vector<T>>& refs) {
  require(hyps.size() == refs.size(), ErrorCode::kInvalidArgument,
          "score: " + std::to_string(hyps.size()) + " hypotheses for " +
              std::to_string(refs.size()) + " references");
  const std::size_t n = hyps.size();
  std::vector<std::vector<EditCounts>> pair(n, std::vector<EditCounts>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t r = 0; r < n; ++r) pair[s][r] = edit_distance(refs[r], hyps[s]);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PermutationScore best;
  bool have = false;
  do {
    std::size_t total = 0;
    for (std::size_t s = 0; s < n; ++s) total += pair[s][perm[s]].distance;
    if (!have || total < best.errors.distance) {
      best.assignment = perm;
      best.errors.distance = total;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  best.errors = {};
  best.streams.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t r = best.assignment[s];
    best.streams[s].errors = pair[s][r];
    best.streams[s].ref_length = refs[r].size();
    best.errors += pair[s][r];
    best.ref_length += refs[r].size();
  }
  return best;
}

}  // namespace mixasr
