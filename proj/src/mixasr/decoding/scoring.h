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

#include <optional>
#include <string>
#include <vector>

#include "mixasr/data/vocab.h"

namespace mixasr {

struct EditCounts {
  std::size_t distance = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  EditCounts& operator+=(const EditCounts& o) {
    distance += o.distance;
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    return *this;
  }
};

// Unit-cost Levenshtein distance from `ref` to `hyp`. Counts come from one
// optimal alignment; the backtrace prefers substitution/match, then deletion,
// then insertion.
template <typename T>
EditCounts edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp);

struct StreamScore {
  EditCounts errors;
  std::size_t ref_length = 0;
};

// Best hypothesis-to-reference assignment for one mixture.
struct PermutationScore {
  std::vector<std::size_t> assignment;  // hypothesis s is scored against ref assignment[s]
  std::vector<StreamScore> streams;
  EditCounts errors;
  std::size_t ref_length = 0;
  double error_rate() const;
};

// Tries all S! assignments, keeps the one with the smallest total distance
// (ties: lexicographically smallest assignment). Throws on count mismatch.
template <typename T>
PermutationScore score_permutation_min(const std::vector<std::vector<T>>& hyps,
                                       const std::vector<std::vector<T>>& refs);

// Splits a token sequence into words at `boundary`; with no boundary symbol
// every token is its own word.
std::vector<TokenSeq> split_words(const TokenSeq& seq, std::optional<Token> boundary);

struct UtteranceReport {
  std::string id;
  PermutationScore chars;
  PermutationScore words;
};

struct EvalReport {
  std::vector<UtteranceReport> utterances;
  EditCounts char_errors;
  std::size_t char_ref_length = 0;
  EditCounts word_errors;
  std::size_t word_ref_length = 0;

  // Token-weighted: total distance over total reference length.
  double cer() const;
  double wer() const;

  void add(std::string id, const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs,
           std::optional<Token> word_boundary = std::nullopt);
  std::string to_text(const Vocabulary& vocab) const;
};

}  // namespace mixasr

#include "mixasr/decoding/scoring_impl.h"
