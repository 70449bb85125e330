/*
 * Copyright 2026 The vaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAUDIT_ERROR_H_
#define VAUDIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vaudit {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kMissingColumn,
  kMissingValue,
  kUnmappableSensitiveValue,
  kUnmappablePositiveValue,
  kNonFiniteValue,
  kEmptyStratum,
  kSliceEmpty,
  kEmptyInput,
  kDegenerateMargin,
  kInfiniteDivergence,
  kInvalidDepth,
  kDimensionMismatch,
  kNonFiniteActivation,
  kDivergedTraining,
  kInsufficientData,
  kMismatchedFamilies,
  kInvalidConfig,
  kIoError,
};

// Stable identifier used in reports and Python exception messages.
std::string_view ErrorCodeName(ErrorCode code);

// True for failures caused by numerics (training divergence, overflow) as
// opposed to malformed input or configuration.
bool IsNumericalFailure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vaudit

#endif  // VAUDIT_ERROR_H_
