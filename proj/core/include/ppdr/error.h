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

#ifndef PPDR_ERROR_H_
#define PPDR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppdr {

enum class ErrorCode {
  // linalg
  kNotSquare,
  kNotSymmetric,
  kNoConvergence,
  kNotPositiveDefinite,
  kKTooLarge,
  kDimensionMismatch,
  // dataset
  kFileNotFound,
  kSchemaMismatch,
  kEmptyAfterDropping,
  kSingleCategoryColumn,
  kInsufficientSamples,
  // scatter / projection
  kUnknownTarget,
  kEmptyClass,
  kEmptyPencil,
  kLengthMismatch,
  // kernel / sanitizer
  kEmptySampleSet,
  kClassTooSmall,
  kSameClass,
  kUnsupportedKernelGradient,
  kNotConverged,
  // classifier / evaluate
  kSingleClassInput,
  kEmptyReport,
  // plumbing
  kInvalidArgument,
  kInvalidConfig,
  kIoError,
  kFormatError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ppdr

#endif  // PPDR_ERROR_H_
