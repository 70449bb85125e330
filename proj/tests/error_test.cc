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

#include <gtest/gtest.h>

#include <set>
#include <string>

namespace vaudit {
namespace {

TEST(ErrorTest, MessageCarriesCodeName) {
  const Error e(ErrorCode::kSliceEmpty, "no rows");
  EXPECT_EQ(e.code(), ErrorCode::kSliceEmpty);
  EXPECT_EQ(std::string(e.what()), "SliceEmpty: no rows");
}

TEST(ErrorTest, NamesAreDistinct) {
  std::set<std::string_view> names;
  for (int c = 0; c <= static_cast<int>(ErrorCode::kIoError); ++c) {
    names.insert(ErrorCodeName(static_cast<ErrorCode>(c)));
  }
  EXPECT_EQ(names.size(), static_cast<std::size_t>(ErrorCode::kIoError) + 1);
}

TEST(ErrorTest, OnlyNumericalCodesAreNumerical) {
  EXPECT_TRUE(IsNumericalFailure(ErrorCode::kDivergedTraining));
  EXPECT_TRUE(IsNumericalFailure(ErrorCode::kNonFiniteActivation));
  EXPECT_FALSE(IsNumericalFailure(ErrorCode::kMissingColumn));
  EXPECT_FALSE(IsNumericalFailure(ErrorCode::kInvalidConfig));
}

}  // namespace
}  // namespace vaudit
