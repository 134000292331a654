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

#include "mixasr/numerics/param_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "mixasr/error.h"

namespace mixasr {

namespace {

constexpr char kMagic[4] = {'M', 'X', 'P', 'C'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32_checked(std::string& out, std::size_t v, const char* what) {
  require(v <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::kDimensionOverflow,
          std::string(what) + " exceeds u32");
  put_u32(out, static_cast<std::uint32_t>(v));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    require(bytes_.size() - pos_ >= n, ErrorCode::kTruncated,
            std::string("parameter container truncated in ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_params(const std::string& metadata, const ParamStore& params) {
  std::string out(kMagic, 4);
  put_u32(out, kParamContainerVersion);
  put_u32_checked(out, metadata.size(), "metadata length");
  out += metadata;
  put_u32_checked(out, params.size(), "tensor count");
  for (ParamId id = 0; id < params.size(); ++id) {
    const std::string& name = params.name(id);
    const Tensor& t = params.value(id);
    put_u32_checked(out, name.size(), "name length");
    out += name;
    put_u32_checked(out, t.rank(), "rank");
    for (std::size_t d : t.shape()) put_u32_checked(out, d, "dimension");
    for (double v : t.values()) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
  }
  return out;
}

ParamContainer decode_params(const std::string& bytes) {
  require(bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0, ErrorCode::kFormat,
          "not a parameter container (bad magic)");
  Reader r(bytes);
  r.str(4, "magic");
  const std::uint32_t version = r.u32("version");
  require(version == kParamContainerVersion, ErrorCode::kFormat,
          "unsupported parameter container version " + std::to_string(version));
  ParamContainer c;
  c.metadata = r.str(r.u32("metadata length"), "metadata");
  const std::uint32_t count = r.u32("tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str(r.u32("name length"), "name");
    const std::uint32_t rank = r.u32("rank");
    require(rank <= 8, ErrorCode::kFormat, "tensor " + name + " has implausible rank");
    std::vector<std::size_t> shape(rank);
    std::uint64_t n = 1;
    for (auto& d : shape) {
      d = r.u32("dims");
      n *= d;
      require(n <= (std::uint64_t{1} << 37), ErrorCode::kDimensionOverflow,
              "tensor " + name + " is too large");
    }
    r.need(8 * n, "tensor payload");
    const ParamId id = c.params.add(std::move(name), shape);
    for (double& v : c.params.value(id).values()) v = r.f64();
  }
  require(r.remaining() == 0, ErrorCode::kFormat, "trailing bytes after parameter container");
  return c;
}

void write_params(const std::filesystem::path& path, const std::string& metadata,
                  const ParamStore& params) {
  const std::string bytes = encode_params(metadata, params);
  // Write-then-rename so a crash never leaves a half-written checkpoint.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::kIo, "cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(out.good(), ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ParamContainer read_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_params(bytes);
}

void assign_params(ParamStore& dst, const ParamStore& src) {
  for (ParamId id = 0; id < dst.size(); ++id) {
    const auto sid = src.find(dst.name(id));
    require(sid.has_value(), ErrorCode::kFormat, "missing parameter " + dst.name(id));
    require(src.value(*sid).same_shape(dst.value(id)), ErrorCode::kFormat,
            "shape mismatch for parameter " + dst.name(id) + ": " +
                src.value(*sid).shape_string() + " vs " + dst.value(id).shape_string());
    dst.value(id) = src.value(*sid);
  }
}

}  // namespace mixasr
