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

#include "vaudit/error.h"

namespace vaudit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMissingValue: return "MissingValue";
    case ErrorCode::kUnmappableSensitiveValue: return "UnmappableSensitiveValue";
    case ErrorCode::kUnmappablePositiveValue: return "UnmappablePositiveValue";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kEmptyStratum: return "EmptyStratum";
    case ErrorCode::kSliceEmpty: return "SliceEmpty";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDegenerateMargin: return "DegenerateMargin";
    case ErrorCode::kInfiniteDivergence: return "InfiniteDivergence";
    case ErrorCode::kInvalidDepth: return "InvalidDepth";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteActivation: return "NonFiniteActivation";
    case ErrorCode::kDivergedTraining: return "DivergedTraining";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kMismatchedFamilies: return "MismatchedFamilies";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool IsNumericalFailure(ErrorCode code) {
  return code == ErrorCode::kDivergedTraining ||
         code == ErrorCode::kNonFiniteActivation;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace vaudit
