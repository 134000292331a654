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

#include "mixasr/decoding/ctc_prefix.h"

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

CtcPrefixState ctc_prefix_initial(const Tensor& logprobs) {
  const std::size_t T = logprobs.rows();
  CtcPrefixState s;
  s.r_n.assign(T, kLogZero);
  s.r_b.assign(T, kLogZero);
  double acc = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    acc += logprobs(t, 0);
    s.r_b[t] = acc;
  }
  s.psi = 0.0;
  return s;
}

CtcPrefixState ctc_prefix_extend(const Tensor& logprobs, const CtcPrefixState& state,
                                 Token token, Token eos) {
  require(!state.closed, ErrorCode::kInvalidArgument, "ctc prefix: prefix already closed");
  const std::size_t T = logprobs.rows();
  CtcPrefixState next;
  next.last = token;
  if (token == eos) {
    next.closed = true;
    next.r_n = state.r_n;
    next.r_b = state.r_b;
    // Zero frames only emit the empty sequence.
    next.psi = T == 0 ? (state.last == 0 ? 0.0 : kLogZero)
                      : log_add(state.r_n[T - 1], state.r_b[T - 1]);
    return next;
  }
  require(token > 0 && static_cast<std::size_t>(token) < logprobs.cols(),
          ErrorCode::kInvalidArgument,
          "ctc prefix: token " + std::to_string(token) + " outside the CTC classes");
  const std::size_t c = static_cast<std::size_t>(token);
  next.r_n.assign(T, kLogZero);
  next.r_b.assign(T, kLogZero);
  next.psi = kLogZero;
  if (T == 0) return next;

  if (state.last == 0) next.r_n[0] = logprobs(0, c);
  next.psi = next.r_n[0];
  for (std::size_t t = 1; t < T; ++t) {
    // Paths that finished g by frame t-1 and may start c at frame t; a repeat
    // of g's last symbol needs a blank in between.
    const double phi = token == state.last ? state.r_b[t - 1]
                                           : log_add(state.r_b[t - 1], state.r_n[t - 1]);
    next.r_n[t] = log_add(next.r_n[t - 1], phi) + logprobs(t, c);
    next.r_b[t] = log_add(next.r_b[t - 1], next.r_n[t - 1]) + logprobs(t, 0);
    next.psi = log_add(next.psi, phi + logprobs(t, c));
  }
  return next;
}

CtcPrefixScore ctc_prefix_score(const Tensor& logprobs, const CtcPrefixState& state,
                                Token token, Token eos) {
  CtcPrefixScore out;
  out.state = ctc_prefix_extend(logprobs, state, token, eos);
  out.delta = out.state.psi == kLogZero ? kLogZero : out.state.psi - state.psi;
  return out;
}

}  // namespace mixasr
