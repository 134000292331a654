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

#include "mixasr/util/keyvalue.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mixasr/error.h"

namespace mixasr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueDoc KeyValueDoc::parse(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      require(t.back() == ']' && t.size() > 2, ErrorCode::kFormat,
              "line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorCode::kFormat,
            "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    require(!key.empty(), ErrorCode::kFormat, "line " + std::to_string(lineno) + ": empty key");
    require(!doc.get(section, key).has_value(), ErrorCode::kFormat,
            "line " + std::to_string(lineno) + ": duplicate key " + section + "." + key);
    doc.entries_.push_back({section, key, trim(t.substr(eq + 1))});
  }
  return doc;
}

std::string KeyValueDoc::serialize() const {
  std::string out;
  std::string current;
  bool first = true;
  for (const auto& e : entries_) {
    if (first || e.section != current) {
      if (!e.section.empty()) {
        if (!first) out += '\n';
        out += "[" + e.section + "]\n";
      }
      current = e.section;
      first = false;
    }
    out += e.key + " = " + e.value + "\n";
  }
  return out;
}

void KeyValueDoc::set(const std::string& section, const std::string& key, std::string value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  // Keep sections contiguous so serialize() emits each header once.
  auto pos = entries_.end();
  for (auto it = entries_.begin(); it != entries_.end(); ++it)
    if (it->section == section) pos = it + 1;
  entries_.insert(pos, {section, key, std::move(value)});
}

std::optional<std::string> KeyValueDoc::get(const std::string& section,
                                            const std::string& key) const {
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) return e.value;
  return std::nullopt;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v),
          ErrorCode::kInvalidArgument, what + ": expected a finite number, got '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size(), ErrorCode::kInvalidArgument,
          what + ": expected a non-negative integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(ErrorCode::kInvalidArgument, what + ": expected true or false, got '" + s + "'");
}

}  // namespace mixasr
