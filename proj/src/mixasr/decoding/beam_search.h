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

#include <string>
#include <vector>

#include "mixasr/decoding/ctc_prefix.h"
#include "mixasr/decoding/lm.h"
#include "mixasr/training/model.h"

namespace mixasr {

// How the CTC branch enters the joint score during search.
enum class CtcScoring {
  kPrefix,   // incremental prefix probability at every step
  kRescore,  // search on attention (+LM) only, add full CTC to finished hypotheses
};

const char* ctc_scoring_name(CtcScoring mode);
CtcScoring parse_ctc_scoring(const std::string& s);

struct DecodeConfig {
  std::size_t beam = 8;
  double ctc_weight = 0.3;     // lambda at decode time
  double lm_weight = 1.0;      // gamma, shallow fusion
  double max_len_ratio = 1.0;  // max symbols = ceil(ratio * T')
  CtcScoring ctc_mode = CtcScoring::kPrefix;

  void validate() const;
  std::size_t max_symbols(std::size_t frames) const;
  friend bool operator==(const DecodeConfig&, const DecodeConfig&) = default;
};

struct StreamDecode {
  TokenSeq tokens;     // symbols only, eos stripped
  double score = 0.0;  // (1 - lambda) att + lambda ctc + gamma lm
  double att = 0.0;
  double ctc = 0.0;
  double lm = 0.0;
  Tensor attention;  // (tokens + 1) x T' attention weights, one row per emitted token
};

// Joint score of a finished hypothesis under `config`'s weights. A zero
// weight drops its term entirely, so an infeasible CTC or LM score does not
// poison the sum.
double joint_score(const DecodeConfig& config, double att, double ctc, double lm);

// Label-synchronous beam search over one encoder stream. `lm` may be null
// (then gamma is ignored).
StreamDecode beam_search_stream(const Model& model, std::size_t stream, const Tensor& enc,
                                const TinyLm* lm, const DecodeConfig& config);

// Decodes every stream independently.
std::vector<StreamDecode> beam_search(const Model& model, const StreamSet& streams,
                                      const TinyLm* lm, const DecodeConfig& config);

}  // namespace mixasr
