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


#include "vaudit/dataset.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_util.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

using testing::Iota;

SchemaSpec PeopleSchema() {
  SchemaSpec s;
  s.columns = {{"age", ColumnRole::kFeature, FeatureKind::kNumeric},
               {"color", ColumnRole::kFeature, FeatureKind::kCategorical},
               {"id", ColumnRole::kIgnore, FeatureKind::kNumeric},
               {"sex", ColumnRole::kSensitive, FeatureKind::kCategorical},
               {"income", ColumnRole::kTarget, FeatureKind::kCategorical}};
  s.disadvantaged_value = "female";
  s.positive_value = ">50K";
  return s;
}

// n rows with S, Y cycling through the four strata in equal shares, plus
// one numeric feature.
TabularDataset Balanced(std::size_t n, std::uint64_t seed = 1) {
  TabularDataset d;
  d.x = Matrix(n, 1);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    d.s.push_back(static_cast<std::uint8_t>(i % 2));
    d.y.push_back(static_cast<std::uint8_t>((i / 2) % 2));
    d.x(i, 0) = rng.Normal() * 3.0 + 10.0;
  }
  d.feature_groups = {{"f", FeatureKind::kNumeric, 0, 1, {}}};
  return d;
}

TEST(LoadCsvTest, MapsSensitiveValue) {
  const TabularDataset d = ParseCsv(
      "age,color,id,sex,income\n"
      "30,red,1,female,>50K\n"
      "40,blue,2,male,<=50K\n"
      "50,green,3,female,<=50K\n",
      PeopleSchema());
  EXPECT_EQ(d.s, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(d.y, (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(LoadCsvTest, OneHotEncodesCategoricals) {
  const TabularDataset d = ParseCsv(
      "age,color,id,sex,income\n"
      "30,red,1,female,>50K\n"
      "40,blue,2,male,<=50K\n"
      "50,green,3,female,<=50K\n",
      PeopleSchema());
  ASSERT_EQ(d.encoded_dim(), 4u);
  ASSERT_EQ(d.feature_groups.size(), 2u);
  const FeatureGroup& color = d.feature_groups[1];
  EXPECT_EQ(color.name, "color");
  EXPECT_EQ(color.width(), 3u);
  EXPECT_EQ(color.levels, (std::vector<std::string>{"blue", "green", "red"}));
  for (std::size_t i = 0; i < d.size(); ++i) {
    double sum = 0;
    for (std::size_t j = color.begin; j < color.end; ++j) sum += d.x(i, j);
    EXPECT_EQ(sum, 1.0);
  }
  EXPECT_EQ(d.x(0, color.begin + 2), 1.0);  // red
  EXPECT_EQ(d.x(0, 0), 30.0);              // raw until standardized
  d.Validate();
}

TEST(LoadCsvTest, MissingCategoricalBecomesLevel) {
  const TabularDataset d = ParseCsv(
      "age,color,id,sex,income\n"
      "30,?,1,female,>50K\n"
      "40,red,2,male,<=50K\n",
      PeopleSchema());
  EXPECT_EQ(d.feature_groups[1].levels,
            (std::vector<std::string>{kMissingLevel, "red"}));
}

TEST(LoadCsvTest, ErrorContract) {
  const SchemaSpec schema = PeopleSchema();
  EXPECT_VAUDIT_ERROR(ParseCsv("age,color,id,sex\n1,a,1,male\n", schema),
                      ErrorCode::kMissingColumn);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\n1,a,1,male,>50K\n2,b,2,man,<=50K\n", schema),
      ErrorCode::kUnmappableSensitiveValue);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\n1,a,1,male,no\n2,b,2,female,no\n", schema),
      ErrorCode::kUnmappablePositiveValue);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\nnan,a,1,male,>50K\n2,b,2,female,no\n", schema),
      ErrorCode::kNonFiniteValue);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\nabc,a,1,male,>50K\n2,b,2,female,no\n", schema),
      ErrorCode::kNonFiniteValue);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\n,a,1,male,>50K\n2,b,2,female,no\n", schema),
      ErrorCode::kMissingValue);
  EXPECT_VAUDIT_ERROR(
      ParseCsv("age,color,id,sex,income\n1,a,1,?,>50K\n2,b,2,female,no\n", schema),
      ErrorCode::kMissingValue);
}

TEST(LoadCsvTest, ReencodingIsBitIdentical) {
  const std::string text =
      "age,color,id,sex,income\n30.25,red,1,female,>50K\n41.5,blue,2,male,<=50K\n";
  const TabularDataset a = ParseCsv(text, PeopleSchema());
  const TabularDataset b = ParseCsv(text, PeopleSchema());
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.ContentHash(), b.ContentHash());
}

TEST(SchemaTest, JsonRoundTripAndValidation) {
  const SchemaSpec s = PeopleSchema();
  const SchemaSpec back = SchemaSpec::FromJson(s.ToJson());
  EXPECT_EQ(back.ToJson(), s.ToJson());
  SchemaSpec two_targets = s;
  two_targets.columns[0].role = ColumnRole::kTarget;
  EXPECT_VAUDIT_ERROR(two_targets.Validate(), ErrorCode::kInvalidConfig);
  SchemaSpec no_sensitive = s;
  no_sensitive.columns[3].role = ColumnRole::kIgnore;
  EXPECT_VAUDIT_ERROR(no_sensitive.Validate(), ErrorCode::kInvalidConfig);
}

TEST(SplitTest, DeclaredFractionsOnBalancedStrata) {
  const SplitAssignment split = SplitDataset(Balanced(100), 7);
  EXPECT_EQ(split.held_out.size(), 20u);
  EXPECT_EQ(split.validation.size(), 8u);
  EXPECT_EQ(split.train.size(), 72u);
}

TEST(SplitTest, Deterministic) {
  const TabularDataset d = Balanced(100);
  EXPECT_EQ(SplitDataset(d, 7), SplitDataset(d, 7));
  EXPECT_NE(SplitDataset(d, 7).held_out, SplitDataset(d, 8).held_out);
}

TEST(SplitTest, EmptyStratumAndTooSmall) {
  TabularDataset d = Balanced(100);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.s[i] == 1) d.y[i] = 0;
  }
  EXPECT_VAUDIT_ERROR(SplitDataset(d, 7), ErrorCode::kEmptyStratum);
  EXPECT_VAUDIT_ERROR(SplitDataset(Balanced(19), 7), ErrorCode::kInsufficientData);
}

// Property: random stratum sizes keep every split invariant.
TEST(SplitTest, InvariantsOnRandomData) {
  Rng gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + gen.Below(400);
    TabularDataset d;
    d.x = Matrix(n, 1);
    const double ps = gen.Uniform(0.1, 0.9), py = gen.Uniform(0.1, 0.9);
    std::size_t cell[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i) {
      d.s.push_back(gen.Bernoulli(ps));
      d.y.push_back(gen.Bernoulli(py));
      ++cell[d.s[i]][d.y[i]];
    }
    d.feature_groups = {{"f", FeatureKind::kNumeric, 0, 1, {}}};
    if (!cell[0][0] || !cell[0][1] || !cell[1][0] || !cell[1][1]) continue;
    const SplitAssignment split = SplitDataset(d, gen.NextU64());

    std::vector<std::size_t> all;
    for (const Part p : {Part::kTrain, Part::kValidation, Part::kHeldOut}) {
      const auto& part = split.part(p);
      EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
      all.insert(all.end(), part.begin(), part.end());
      for (int s = 0; s < 2; ++s) {
        for (int y = 0; y < 2; ++y) {
          if (cell[s][y] < 3) continue;
          EXPECT_TRUE(std::any_of(part.begin(), part.end(), [&](std::size_t i) {
            return d.s[i] == s && d.y[i] == y;
          })) << "stratum missing from " << PartName(p);
        }
      }
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, Iota(n));
    EXPECT_LE(std::abs(static_cast<double>(split.held_out.size()) - 0.2 * n), 2.0);
    const double train_portion =
        static_cast<double>(split.train.size() + split.validation.size());
    EXPECT_LE(std::abs(static_cast<double>(split.validation.size()) - 0.1 * train_portion),
              2.0);
  }
}

TEST(StandardizeTest, TrainColumnsHaveZeroMeanUnitStd) {
  TabularDataset d = Balanced(500, 3);
  d.x = Matrix(500, 2);
  Rng rng(4);
  for (std::size_t i = 0; i < 500; ++i) {
    d.x(i, 0) = rng.Normal() * 1e3 + 5e4;
    d.x(i, 1) = 7.0;
  }
  d.feature_groups = {{"a", FeatureKind::kNumeric, 0, 1, {}},
                      {"b", FeatureKind::kNumeric, 1, 2, {}}};
  const SplitAssignment split = SplitDataset(d, 11);
  const TabularDataset z = Standardize(d, split);
  double mean = 0, sq = 0;
  for (const std::size_t i : split.train) mean += z.x(i, 0);
  mean /= static_cast<double>(split.train.size());
  for (const std::size_t i : split.train) sq += (z.x(i, 0) - mean) * (z.x(i, 0) - mean);
  const double sd = std::sqrt(sq / static_cast<double>(split.train.size()));
  EXPECT_NEAR(mean, 0.0, 1e-9);
  EXPECT_NEAR(sd, 1.0, 1e-9);
  for (std::size_t i = 0; i < 500; ++i) EXPECT_EQ(z.x(i, 1), 0.0);
  ASSERT_EQ(z.encoding_stats.size(), 2u);
  EXPECT_EQ(z.encoding_stats[1].stddev, 0.0);
}

TEST(StandardizeTest, LeavesOneHotColumnsAlone) {
  const TabularDataset raw = ParseCsv(
      "age,color,id,sex,income\n"
      "30,red,1,female,>50K\n40,blue,2,male,<=50K\n50,red,3,female,<=50K\n"
      "31,red,1,male,>50K\n",
      PeopleSchema());
  SplitAssignment split;
  split.train = {0, 1, 2, 3};
  const TabularDataset z = Standardize(raw, split);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 1; j < z.encoded_dim(); ++j) EXPECT_EQ(z.x(i, j), raw.x(i, j));
  }
}

TEST(SliceTest, DirectFilter) {
  TabularDataset d;
  d.x = Matrix(3, 1);
  d.s = {1, 1, 0};
  d.y = {1, 0, 1};
  const auto idx = Iota(3);
  EXPECT_EQ(Slice(d, idx, GroupFilter::kDisadvantaged, LabelFilter::kPositive),
            (std::vector<std::size_t>{0}));
  EXPECT_EQ(Slice(d, idx, GroupFilter::kAll, LabelFilter::kAll), idx);
}

TEST(SliceTest, EmptyFilterThrows) {
  TabularDataset d;
  d.x = Matrix(2, 1);
  d.s = {0, 0};
  d.y = {1, 0};
  EXPECT_VAUDIT_ERROR(
      Slice(d, Iota(2), GroupFilter::kDisadvantaged, LabelFilter::kPositive),
      ErrorCode::kSliceEmpty);
}

// Property: the four (group, label) slices partition a part.
TEST(SliceTest, FourSlicesPartitionThePart) {
  const TabularDataset d = Balanced(240, 5);
  const SplitAssignment split = SplitDataset(d, 3);
  for (const Part p : {Part::kTrain, Part::kValidation, Part::kHeldOut}) {
    std::vector<std::size_t> all;
    for (const GroupFilter g : {GroupFilter::kAdvantaged, GroupFilter::kDisadvantaged}) {
      for (const LabelFilter l : {LabelFilter::kPositive, LabelFilter::kNegative}) {
        const auto s = Slice(d, split, p, g, l);
        all.insert(all.end(), s.begin(), s.end());
      }
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    EXPECT_EQ(all, split.part(p));
  }
}

TEST(PartTest, NamesRoundTrip) {
  for (const Part p : {Part::kTrain, Part::kValidation, Part::kHeldOut}) {
    EXPECT_EQ(ParsePart(PartName(p)), p);
  }
  EXPECT_VAUDIT_ERROR(ParsePart("test"), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace vaudit
