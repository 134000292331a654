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
#include <vector>

namespace mixasr {

// Line-oriented `key = value` text grouped under `[section]` headers.
// Blank lines and lines starting with '#' are ignored. Keys are addressed as
// "section.key"; keys before any header live in the empty section.
class KeyValueDoc {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
  };

  static KeyValueDoc parse(const std::string& text);
  std::string serialize() const;

  void set(const std::string& section, const std::string& key, std::string value);
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Strict scalar parsing; throw kInvalidArgument naming `what` on failure.
double parse_double(const std::string& s, const std::string& what);
std::uint64_t parse_uint(const std::string& s, const std::string& what);
bool parse_bool(const std::string& s, const std::string& what);

}  // namespace mixasr
