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

#include <vector>

#include "mixasr/data/vocab.h"
#include "mixasr/numerics/tensor.h"

namespace mixasr {

// Forward variables of the CTC prefix probability for one prefix h:
//   r_n[t]  log p(x_1..t emits h, last frame non-blank)
//   r_b[t]  log p(x_1..t emits h, last frame blank)
//   psi     log p(h is a prefix of the CTC output), or log p(output == h)
//           once the prefix is closed with eos.
struct CtcPrefixState {
  std::vector<double> r_n;
  std::vector<double> r_b;
  double psi = 0.0;
  Token last = 0;  // last symbol of the prefix, 0 for the empty prefix
  bool closed = false;
};

// State of the empty prefix over T x C log-probabilities.
CtcPrefixState ctc_prefix_initial(const Tensor& logprobs);

// Extends `state` by `token` (a symbol, or `eos` to close the prefix).
CtcPrefixState ctc_prefix_extend(const Tensor& logprobs, const CtcPrefixState& state,
                                 Token token, Token eos);

struct CtcPrefixScore {
  double delta = 0.0;  // psi(h . token) - psi(h); -inf when infeasible
  CtcPrefixState state;
};

CtcPrefixScore ctc_prefix_score(const Tensor& logprobs, const CtcPrefixState& state,
                                Token token, Token eos);

}  // namespace mixasr
