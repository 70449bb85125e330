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

// Tabular datasets in (X, S, Y) form: encoded features, a binary sensitive
// attribute (1 = disadvantaged) and a binary target (1 = positive class).

#ifndef VAUDIT_DATASET_H_
#define VAUDIT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace vaudit {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  std::span<const double> values() const { return values_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

enum class ColumnRole { kFeature, kSensitive, kTarget, kIgnore };
enum class FeatureKind { kNumeric, kCategorical };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
  FeatureKind kind = FeatureKind::kNumeric;
};

struct SchemaSpec {
  std::vector<ColumnSpec> columns;
  std::string disadvantaged_value;
  std::string positive_value;
  // Raw tokens treated as missing. Missing is only legal in categorical
  // feature columns, where it becomes the level kMissingLevel.
  std::vector<std::string> missing_values = {"", "?", "NA"};

  // Throws Error(kInvalidConfig) unless there is exactly one sensitive and
  // one target column and column names are unique.
  void Validate() const;

  static SchemaSpec FromJson(const nlohmann::json& j);
  static SchemaSpec FromFile(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
};

inline constexpr const char* kMissingLevel = "<missing>";

// One original feature and the contiguous encoded columns [begin, end).
struct FeatureGroup {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  std::size_t begin = 0;
  std::size_t end = 0;
  // Category labels in encoded order (categorical only).
  std::vector<std::string> levels;

  std::size_t width() const { return end - begin; }
  bool operator==(const FeatureGroup&) const = default;
};

struct ColumnStats {
  std::size_t column = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool operator==(const ColumnStats&) const = default;
};

struct TabularDataset {
  Matrix x;
  std::vector<std::uint8_t> s;
  std::vector<std::uint8_t> y;
  std::vector<FeatureGroup> feature_groups;
  // Filled by Standardize(); empty for freshly loaded (raw) data.
  std::vector<ColumnStats> encoding_stats;
  std::string source;

  std::size_t size() const { return y.size(); }
  std::size_t encoded_dim() const { return x.cols(); }

  // Checks the structural invariants (finite rows, aligned lengths, feature
  // groups tile the encoded columns, one-hot spans are one-hot).
  void Validate() const;

  // FNV-1a over the encoded matrix bits, S and Y.
  std::uint64_t ContentHash() const;
};

TabularDataset LoadCsv(const std::filesystem::path& path,
                       const SchemaSpec& schema);

// Same as LoadCsv on in-memory CSV text (used by tests and the bindings).
TabularDataset ParseCsv(const std::string& text, const SchemaSpec& schema,
                        const std::string& source = "<memory>");

enum class Part { kTrain, kValidation, kHeldOut };

struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> held_out;
  std::uint64_t seed = 0;

  const std::vector<std::size_t>& part(Part p) const;
  bool operator==(const SplitAssignment&) const = default;
};

inline constexpr double kHeldOutFraction = 0.20;
inline constexpr double kValidationFraction = 0.10;

// Stratified on the joint (S, Y) cell. Held-out takes 20% of each stratum,
// validation 10% of the remaining train portion; totals are apportioned by
// largest remainder so they match the declared fractions up to rounding.
// Strata with at least three rows appear in every part. Index lists are
// sorted ascending.
SplitAssignment SplitDataset(const TabularDataset& data, std::uint64_t seed);

// Z-scores numeric columns with train-part statistics (population standard
// deviation). Zero-variance columns become constant 0.
TabularDataset Standardize(const TabularDataset& data,
                           const SplitAssignment& split);

struct Partition {
  TabularDataset data;  // standardized
  SplitAssignment split;
};

Partition PartitionDataset(const TabularDataset& raw, std::uint64_t seed);

enum class GroupFilter { kAdvantaged, kDisadvantaged, kAll };
enum class LabelFilter { kPositive, kNegative, kAll };

// Rows of `indices` whose S and Y match the filters, order preserved.
// Throws Error(kSliceEmpty) when nothing matches.
std::vector<std::size_t> Slice(const TabularDataset& data,
                               std::span<const std::size_t> indices,
                               GroupFilter group, LabelFilter label);

std::vector<std::size_t> Slice(const TabularDataset& data,
                               const SplitAssignment& split, Part part,
                               GroupFilter group, LabelFilter label);

std::string_view PartName(Part part);
Part ParsePart(std::string_view name);

}  // namespace vaudit

#endif  // VAUDIT_DATASET_H_
