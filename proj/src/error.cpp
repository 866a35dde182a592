// Copyright 2026 The albench Authors
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

#include "error.hpp"

namespace albench {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kNotInUnlabeled: return "NotInUnlabeled";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kMissingMinority: return "MissingMinority";
    case ErrorCode::kMissingImage: return "MissingImage";
    case ErrorCode::kMalformedAnnotation: return "MalformedAnnotation";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kPoolExhausted: return "PoolExhausted";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kBatchTooSmall: return "BatchTooSmall";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace albench
