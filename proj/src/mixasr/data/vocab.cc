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

#include "mixasr/data/vocab.h"

#include <set>
#include <sstream>

#include "mixasr/error.h"

namespace mixasr {

Vocabulary::Vocabulary(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  require(!symbols_.empty(), ErrorCode::kInvalidArgument, "empty vocabulary");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    require(!s.empty() && s.find_first_of(" \t\n") == std::string::npos,
            ErrorCode::kInvalidArgument, "invalid symbol name '" + s + "'");
    require(s.front() != '<', ErrorCode::kInvalidArgument,
            "symbol names starting with '<' are reserved: " + s);
    require(seen.insert(s).second, ErrorCode::kInvalidArgument,
            "duplicate symbol " + s);
  }
}

Vocabulary Vocabulary::with_default_symbols(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i))
                           : "s" + std::to_string(i));
  return Vocabulary(std::move(names));
}

std::size_t Vocabulary::att_class(Token t) const {
  if (t == eos()) return symbols_.size();
  require(is_symbol(t), ErrorCode::kInvalidArgument,
          "token " + std::to_string(t) + " has no attention class");
  return static_cast<std::size_t>(t - 1);
}

Token Vocabulary::att_token(std::size_t cls) const {
  require(cls <= symbols_.size(), ErrorCode::kInvalidArgument,
          "attention class out of range");
  return cls == symbols_.size() ? eos() : static_cast<Token>(cls + 1);
}

const std::string& Vocabulary::name(Token t) const {
  require(contains(t), ErrorCode::kInvalidArgument,
          "token " + std::to_string(t) + " out of range");
  if (t == 0) return reserved_[0];
  if (t == sos()) return reserved_[1];
  if (t == eos()) return reserved_[2];
  return symbols_[static_cast<std::size_t>(t - 1)];
}

std::optional<Token> Vocabulary::lookup(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == name) return static_cast<Token>(i + 1);
  for (std::size_t i = 0; i < reserved_.size(); ++i)
    if (reserved_[i] == name) return i == 0 ? blank() : (i == 1 ? sos() : eos());
  return std::nullopt;
}

std::string Vocabulary::join(const TokenSeq& seq) const {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += name(seq[i]);
  }
  return out;
}

TokenSeq Vocabulary::parse(std::string_view text) const {
  TokenSeq seq;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    auto t = lookup(word);
    require(t.has_value() && is_symbol(*t), ErrorCode::kFormat,
            "unknown symbol '" + word + "'");
    seq.push_back(*t);
  }
  return seq;
}

}  // namespace mixasr
