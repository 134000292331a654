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

#include "mixasr/error.h"

namespace mixasr {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kTruncated: return "truncated input";
    case ErrorCode::kDimensionOverflow: return "dimension overflow";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNumeric: return "numeric failure";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown";
}

}  // namespace mixasr
