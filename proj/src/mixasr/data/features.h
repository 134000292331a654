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
#include <filesystem>
#include <string>

#include "mixasr/numerics/tensor.h"

namespace mixasr {

// A T x D matrix of frames.
using FeatureSequence = Tensor;

FeatureSequence make_features(std::size_t frames, std::size_t dim);

// Binary, little-endian:
//   "FTRS" | u32 version (=1) | u32 T | u32 D | T*D float64 row-major
// Errors: kIo (open/write), kFormat (magic/version), kTruncated (short
// header or payload, or trailing bytes), kDimensionOverflow (T*D does not fit).
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

void write_features(const std::filesystem::path& path, const FeatureSequence& f);
FeatureSequence read_features(const std::filesystem::path& path);

std::string encode_features(const FeatureSequence& f);
FeatureSequence decode_features(const std::string& bytes);

}  // namespace mixasr
