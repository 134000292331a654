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

#include "mixasr/data/features.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "mixasr/error.h"

namespace mixasr {

namespace {

constexpr char kMagic[4] = {'F', 'T', 'R', 'S'};
constexpr std::size_t kHeaderBytes = 16;
// Refuse payloads above 1 TiB; anything that large is a corrupt header.
constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 40;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
  return v;
}

double get_f64(const std::string& in, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

FeatureSequence make_features(std::size_t frames, std::size_t dim) {
  return Tensor::matrix(frames, dim);
}

std::string encode_features(const FeatureSequence& f) {
  require(f.rank() == 2, ErrorCode::kShapeMismatch,
          "feature sequence must be rank 2, got " + f.shape_string());
  require(f.dim(0) <= std::numeric_limits<std::uint32_t>::max() &&
              f.dim(1) <= std::numeric_limits<std::uint32_t>::max(),
          ErrorCode::kDimensionOverflow, "feature dimensions exceed u32");
  std::string out(kMagic, 4);
  out.reserve(kHeaderBytes + 8 * f.size());
  put_u32(out, kFeatureFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(f.dim(0)));
  put_u32(out, static_cast<std::uint32_t>(f.dim(1)));
  for (double v : f.values()) put_f64(out, v);
  return out;
}

FeatureSequence decode_features(const std::string& bytes) {
  require(bytes.size() >= 4, ErrorCode::kTruncated, "feature file shorter than magic");
  require(std::memcmp(bytes.data(), kMagic, 4) == 0, ErrorCode::kFormat,
          "bad feature file magic");
  require(bytes.size() >= kHeaderBytes, ErrorCode::kTruncated,
          "feature file header truncated");
  const std::uint32_t version = get_u32(bytes, 4);
  require(version == kFeatureFormatVersion, ErrorCode::kFormat,
          "unsupported feature file version " + std::to_string(version));
  const std::uint64_t frames = get_u32(bytes, 8);
  const std::uint64_t dim = get_u32(bytes, 12);
  const std::uint64_t count = frames * dim;  // < 2^64, both factors < 2^32
  require(count <= kMaxPayloadBytes / 8, ErrorCode::kDimensionOverflow,
          "feature payload of " + std::to_string(frames) + "x" + std::to_string(dim) +
              " exceeds the supported size");
  const std::uint64_t expected = kHeaderBytes + 8 * count;
  require(bytes.size() >= expected, ErrorCode::kTruncated,
          "feature payload truncated: expected " + std::to_string(expected) +
              " bytes, got " + std::to_string(bytes.size()));
  require(bytes.size() == expected, ErrorCode::kTruncated,
          "trailing bytes after feature payload");
  FeatureSequence f = make_features(frames, dim);
  for (std::size_t i = 0; i < count; ++i) f[i] = get_f64(bytes, kHeaderBytes + 8 * i);
  return f;
}

void write_features(const std::filesystem::path& path, const FeatureSequence& f) {
  const std::string bytes = encode_features(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorCode::kIo, "write failed: " + path.string());
}

FeatureSequence read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_features(bytes);
}

}  // namespace mixasr
