// Copyright 2026 The PPDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppdr/error.h"

namespace ppdr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kEmptyAfterDropping: return "EmptyAfterDropping";
    case ErrorCode::kSingleCategoryColumn: return "SingleCategoryColumn";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kEmptyPencil: return "EmptyPencil";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySampleSet: return "EmptySampleSet";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kSameClass: return "SameClass";
    case ErrorCode::kUnsupportedKernelGradient: return "UnsupportedKernelGradient";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kSingleClassInput: return "SingleClassInput";
    case ErrorCode::kEmptyReport: return "EmptyReport";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace ppdr
