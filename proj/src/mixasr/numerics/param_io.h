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

#include <filesystem>
#include <string>

#include "mixasr/numerics/params.h"

namespace mixasr {

// Parameter container, binary little-endian:
//
//   "MXPC"            4 bytes magic
//   u32 version       = 1
//   u32 meta_len      followed by meta_len bytes of UTF-8 metadata text
//   u32 count         number of tensors
//   count times:
//     u32 name_len, name bytes (UTF-8)
//     u32 rank, rank x u32 dims
//     product(dims) x float64 values, row-major
inline constexpr std::uint32_t kParamContainerVersion = 1;

struct ParamContainer {
  std::string metadata;
  ParamStore params;
};

std::string encode_params(const std::string& metadata, const ParamStore& params);
ParamContainer decode_params(const std::string& bytes);

void write_params(const std::filesystem::path& path, const std::string& metadata,
                  const ParamStore& params);
ParamContainer read_params(const std::filesystem::path& path);

// Copies values by name into `dst`; every tensor in dst must be present in
// src with the same shape (kFormat otherwise).
void assign_params(ParamStore& dst, const ParamStore& src);

}  // namespace mixasr
