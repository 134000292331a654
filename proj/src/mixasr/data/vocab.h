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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixasr {

using Token = std::int32_t;
using TokenSeq = std::vector<Token>;

// Token layout: 0 = blank, 1..V = symbols, V+1 = sos, V+2 = eos.
//
// Two output class spaces index into it:
//   CTC classes       0..V   (blank + symbols; class id == token id)
//   attention classes 0..V   (symbols at token-1, eos at V; no blank)
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> symbols);

  // Symbols "a", "b", ... (then "s<k>" beyond 26).
  static Vocabulary with_default_symbols(std::size_t n);

  std::size_t num_symbols() const { return symbols_.size(); }
  std::size_t size() const { return symbols_.size() + 3; }

  Token blank() const { return 0; }
  Token sos() const { return static_cast<Token>(symbols_.size() + 1); }
  Token eos() const { return static_cast<Token>(symbols_.size() + 2); }
  bool is_symbol(Token t) const {
    return t >= 1 && t <= static_cast<Token>(symbols_.size());
  }
  bool contains(Token t) const { return t >= 0 && t < static_cast<Token>(size()); }

  std::size_t ctc_classes() const { return symbols_.size() + 1; }
  std::size_t att_classes() const { return symbols_.size() + 1; }
  std::size_t att_class(Token t) const;
  Token att_token(std::size_t cls) const;

  const std::string& name(Token t) const;
  std::optional<Token> lookup(std::string_view name) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  // Space-separated symbol names.
  std::string join(const TokenSeq& seq) const;
  TokenSeq parse(std::string_view text) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::vector<std::string> reserved_{"<blank>", "<sos>", "<eos>"};
};

}  // namespace mixasr
