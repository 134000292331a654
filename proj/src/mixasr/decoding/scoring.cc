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

#include "mixasr/decoding/scoring.h"

#include <cstdio>

namespace mixasr {

namespace {

double rate(std::size_t errors, std::size_t length) {
  // An empty reference set has no defined rate; report 0 errors as 0.
  if (length == 0) return errors == 0 ? 0.0 : static_cast<double>(errors);
  return static_cast<double>(errors) / static_cast<double>(length);
}

std::string percent(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * r);
  return buf;
}

std::string assignment_string(const std::vector<std::size_t>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i] + 1);
  return s;
}

}  // namespace

double PermutationScore::error_rate() const { return rate(errors.distance, ref_length); }

std::vector<TokenSeq> split_words(const TokenSeq& seq, std::optional<Token> boundary) {
  std::vector<TokenSeq> words;
  if (!boundary) {
    for (Token t : seq) words.push_back({t});
    return words;
  }
  TokenSeq cur;
  for (Token t : seq) {
    if (t == *boundary) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(t);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

double EvalReport::cer() const { return rate(char_errors.distance, char_ref_length); }
double EvalReport::wer() const { return rate(word_errors.distance, word_ref_length); }

void EvalReport::add(std::string id, const std::vector<TokenSeq>& hyps,
                     const std::vector<TokenSeq>& refs, std::optional<Token> word_boundary) {
  UtteranceReport u;
  u.id = std::move(id);
  u.chars = score_permutation_min(hyps, refs);
  std::vector<std::vector<TokenSeq>> hw, rw;
  for (const auto& h : hyps) hw.push_back(split_words(h, word_boundary));
  for (const auto& r : refs) rw.push_back(split_words(r, word_boundary));
  u.words = score_permutation_min(hw, rw);
  char_errors += u.chars.errors;
  char_ref_length += u.chars.ref_length;
  word_errors += u.words.errors;
  word_ref_length += u.words.ref_length;
  utterances.push_back(std::move(u));
}

std::string EvalReport::to_text(const Vocabulary&) const {
  std::string out;
  out += "metric\terrors\tref_length\tsub\tins\tdel\trate_percent\n";
  auto line = [&](const char* name, const EditCounts& e, std::size_t len, double r) {
    out += std::string(name) + "\t" + std::to_string(e.distance) + "\t" + std::to_string(len) +
           "\t" + std::to_string(e.substitutions) + "\t" + std::to_string(e.insertions) + "\t" +
           std::to_string(e.deletions) + "\t" + percent(r) + "\n";
  };
  line("CER", char_errors, char_ref_length, cer());
  line("WER", word_errors, word_ref_length, wer());
  out += "\nid\tassignment\tchar_errors\tchar_ref_length\tcer_percent\tword_errors\t"
         "word_ref_length\twer_percent\n";
  for (const auto& u : utterances) {
    out += u.id + "\t" + assignment_string(u.chars.assignment) + "\t" +
           std::to_string(u.chars.errors.distance) + "\t" + std::to_string(u.chars.ref_length) +
           "\t" + percent(u.chars.error_rate()) + "\t" + std::to_string(u.words.errors.distance) +
           "\t" + std::to_string(u.words.ref_length) + "\t" + percent(u.words.error_rate()) + "\n";
  }
  return out;
}

}  // namespace mixasr
