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

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "csv.h"
#include "vaudit/error.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

constexpr std::uint64_t kSplitStream = 0x5317;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

ColumnRole ParseRole(const std::string& role) {
  if (role == "feature") return ColumnRole::kFeature;
  if (role == "sensitive") return ColumnRole::kSensitive;
  if (role == "target") return ColumnRole::kTarget;
  if (role == "ignore") return ColumnRole::kIgnore;
  throw Error(ErrorCode::kInvalidConfig, "unknown column role '" + role + "'");
}

std::string RoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature: return "feature";
    case ColumnRole::kSensitive: return "sensitive";
    case ColumnRole::kTarget: return "target";
    case ColumnRole::kIgnore: return "ignore";
  }
  return "ignore";
}

FeatureKind ParseKind(const std::string& kind) {
  if (kind == "numeric") return FeatureKind::kNumeric;
  if (kind == "categorical") return FeatureKind::kCategorical;
  throw Error(ErrorCode::kInvalidConfig, "unknown feature kind '" + kind + "'");
}

void FnvMix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFu;
    h *= 1099511628211ULL;
  }
}

// Largest-remainder apportionment of `total` across cells with the given
// real-valued quotas. Ties go to the lower cell index.
std::array<std::size_t, 4> Apportion(const std::array<double, 4>& quotas,
                                     std::size_t total) {
  std::array<std::size_t, 4> counts{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    counts[c] = static_cast<std::size_t>(std::floor(quotas[c]));
    assigned += counts[c];
  }
  std::array<std::size_t, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a] - std::floor(quotas[a]) > quotas[b] - std::floor(quotas[b]);
  });
  for (std::size_t k = 0; assigned < total && k < 4; ++k) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

}  // namespace

void SchemaSpec::Validate() const {
  std::size_t sensitive = 0;
  std::size_t target = 0;
  std::set<std::string> names;
  for (const auto& column : columns) {
    if (!names.insert(column.name).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate column '" + column.name + "' in schema");
    }
    if (column.role == ColumnRole::kSensitive) ++sensitive;
    if (column.role == ColumnRole::kTarget) ++target;
  }
  if (sensitive != 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "schema needs exactly one sensitive column");
  }
  if (target != 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "schema needs exactly one target column");
  }
}

SchemaSpec SchemaSpec::FromJson(const nlohmann::json& j) {
  SchemaSpec schema;
  try {
    for (const auto& c : j.at("columns")) {
      ColumnSpec column;
      column.name = c.at("name").get<std::string>();
      column.role = ParseRole(c.value("role", std::string("feature")));
      column.kind = ParseKind(c.value("kind", std::string("numeric")));
      schema.columns.push_back(std::move(column));
    }
    schema.disadvantaged_value = j.at("disadvantaged_value").get<std::string>();
    schema.positive_value = j.at("positive_value").get<std::string>();
    if (j.contains("missing_values")) {
      schema.missing_values =
          j.at("missing_values").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("malformed schema: ") + e.what());
  }
  schema.Validate();
  return schema;
}

SchemaSpec SchemaSpec::FromFile(const std::filesystem::path& path) {
  const std::string text = csv::ReadFile(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                "schema " + path.string() + " is not valid JSON: " + e.what());
  }
  return FromJson(j);
}

nlohmann::json SchemaSpec::ToJson() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns) {
    cols.push_back({{"name", c.name},
                    {"role", RoleName(c.role)},
                    {"kind", c.kind == FeatureKind::kNumeric ? "numeric"
                                                             : "categorical"}});
  }
  return {{"columns", cols},
          {"disadvantaged_value", disadvantaged_value},
          {"positive_value", positive_value},
          {"missing_values", missing_values}};
}

void TabularDataset::Validate() const {
  const std::size_t n = x.rows();
  if (s.size() != n || y.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "X, S and Y lengths differ");
  }
  for (const double v : x.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "non-finite encoded value");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] > 1 || y[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, "S and Y must be 0/1");
    }
  }
  std::size_t next = 0;
  for (const auto& group : feature_groups) {
    if (group.begin != next || group.end <= group.begin) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature groups must tile the encoded columns");
    }
    next = group.end;
    if (group.kind != FeatureKind::kCategorical) continue;
    for (std::size_t r = 0; r < n; ++r) {
      int ones = 0;
      for (std::size_t c = group.begin; c < group.end; ++c) {
        const double v = x(r, c);
        if (v == 1.0) {
          ++ones;
        } else if (v != 0.0) {
          ones = -1;
          break;
        }
      }
      if (ones != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "one-hot span of '" + group.name + "' is not one-hot");
      }
    }
  }
  if (next != x.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature groups must tile the encoded columns");
  }
}

std::uint64_t TabularDataset::ContentHash() const {
  std::uint64_t h = 1469598103934665603ULL;
  FnvMix(h, x.rows());
  FnvMix(h, x.cols());
  for (const double v : x.values()) FnvMix(h, std::bit_cast<std::uint64_t>(v));
  for (const auto v : s) FnvMix(h, v);
  for (const auto v : y) FnvMix(h, v);
  return h;
}

TabularDataset ParseCsv(const std::string& text, const SchemaSpec& schema,
                        const std::string& source) {
  schema.Validate();
  const std::vector<csv::Row> rows = csv::Parse(text);
  if (rows.empty()) throw Error(ErrorCode::kParseError, "CSV has no header");

  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    header.emplace(std::string(Trim(rows[0][i])), i);
  }
  std::vector<std::size_t> position(schema.columns.size());
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    const auto it = header.find(schema.columns[k].name);
    if (it == header.end()) {
      throw Error(ErrorCode::kMissingColumn,
                  "column '" + schema.columns[k].name + "' not in CSV header");
    }
    position[k] = it->second;
  }

  const std::size_t n = rows.size() - 1;
  const std::set<std::string> missing(schema.missing_values.begin(),
                                      schema.missing_values.end());
  const auto field = [&](std::size_t r, std::size_t k) -> std::string_view {
    const csv::Row& row = rows[r + 1];
    if (row.size() != rows[0].size()) {
      throw Error(ErrorCode::kParseError,
                  "row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " fields, header has " +
                      std::to_string(rows[0].size()));
    }
    return Trim(row[position[k]]);
  };

  // First pass: categorical domains (sorted, so encoding is order-free).
  std::vector<std::map<std::string, std::size_t>> levels(schema.columns.size());
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    const ColumnSpec& column = schema.columns[k];
    if (column.role != ColumnRole::kFeature ||
        column.kind != FeatureKind::kCategorical) {
      continue;
    }
    for (std::size_t r = 0; r < n; ++r) {
      std::string value(field(r, k));
      if (missing.contains(value)) value = kMissingLevel;
      levels[k].emplace(std::move(value), 0);
    }
    std::size_t index = 0;
    for (auto& [_, slot] : levels[k]) slot = index++;
  }

  TabularDataset data;
  data.source = source;
  std::size_t width = 0;
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    const ColumnSpec& column = schema.columns[k];
    if (column.role != ColumnRole::kFeature) continue;
    FeatureGroup group;
    group.name = column.name;
    group.kind = column.kind;
    group.begin = width;
    if (column.kind == FeatureKind::kCategorical) {
      for (const auto& [level, _] : levels[k]) group.levels.push_back(level);
      width += group.levels.size();
    } else {
      width += 1;
    }
    group.end = width;
    if (group.width() == 0) {
      throw Error(ErrorCode::kEmptyInput,
                  "feature '" + column.name + "' has no values");
    }
    data.feature_groups.push_back(std::move(group));
  }

  data.x = Matrix(n, width);
  data.s.assign(n, 0);
  data.y.assign(n, 0);
  bool saw_disadvantaged = false;
  bool saw_positive = false;
  std::size_t group_index = 0;
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    const ColumnSpec& column = schema.columns[k];
    if (column.role == ColumnRole::kIgnore) continue;
    if (column.role == ColumnRole::kSensitive ||
        column.role == ColumnRole::kTarget) {
      const bool sensitive = column.role == ColumnRole::kSensitive;
      const std::string& mapped =
          sensitive ? schema.disadvantaged_value : schema.positive_value;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string_view value = field(r, k);
        if (missing.contains(std::string(value))) {
          throw Error(ErrorCode::kMissingValue,
                      "missing value in column '" + column.name + "' row " +
                          std::to_string(r + 1));
        }
        const std::uint8_t bit = value == mapped ? 1 : 0;
        if (sensitive) {
          data.s[r] = bit;
          saw_disadvantaged |= bit == 1;
        } else {
          data.y[r] = bit;
          saw_positive |= bit == 1;
        }
      }
      continue;
    }
    const FeatureGroup& group = data.feature_groups[group_index++];
    for (std::size_t r = 0; r < n; ++r) {
      const std::string_view value = field(r, k);
      if (column.kind == FeatureKind::kCategorical) {
        std::string level(value);
        if (missing.contains(level)) level = kMissingLevel;
        data.x(r, group.begin + levels[k].at(level)) = 1.0;
        continue;
      }
      if (missing.contains(std::string(value))) {
        throw Error(ErrorCode::kMissingValue,
                    "missing numeric value in column '" + column.name +
                        "' row " + std::to_string(r + 1));
      }
      double parsed = 0.0;
      const auto result =
          std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (result.ec != std::errc() ||
          result.ptr != value.data() + value.size()) {
        throw Error(ErrorCode::kNonFiniteValue,
                    "column '" + column.name + "' row " +
                        std::to_string(r + 1) + ": '" + std::string(value) +
                        "' is not a number");
      }
      if (!std::isfinite(parsed)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    "column '" + column.name + "' row " +
                        std::to_string(r + 1) + " is not finite");
      }
      data.x(r, group.begin) = parsed;
    }
  }
  if (!saw_disadvantaged) {
    throw Error(ErrorCode::kUnmappableSensitiveValue,
                "disadvantaged value '" + schema.disadvantaged_value +
                    "' never occurs");
  }
  if (!saw_positive) {
    throw Error(ErrorCode::kUnmappablePositiveValue,
                "positive value '" + schema.positive_value + "' never occurs");
  }
  return data;
}

TabularDataset LoadCsv(const std::filesystem::path& path,
                       const SchemaSpec& schema) {
  return ParseCsv(csv::ReadFile(path), schema, path.string());
}

const std::vector<std::size_t>& SplitAssignment::part(Part p) const {
  switch (p) {
    case Part::kTrain: return train;
    case Part::kValidation: return validation;
    case Part::kHeldOut: return held_out;
  }
  return held_out;
}

SplitAssignment SplitDataset(const TabularDataset& data, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n < 20) {
    throw Error(ErrorCode::kInsufficientData,
                "need at least 20 rows to split, got " + std::to_string(n));
  }
  std::array<std::vector<std::size_t>, 4> strata;
  for (std::size_t i = 0; i < n; ++i) {
    strata[data.s[i] * 2 + data.y[i]].push_back(i);
  }
  for (std::size_t c = 0; c < 4; ++c) {
    if (strata[c].empty()) {
      throw Error(ErrorCode::kEmptyStratum,
                  "no rows with S=" + std::to_string(c / 2) +
                      ", Y=" + std::to_string(c % 2));
    }
  }

  std::array<double, 4> quotas{};
  for (std::size_t c = 0; c < 4; ++c) {
    quotas[c] = kHeldOutFraction * static_cast<double>(strata[c].size());
  }
  const auto held = Apportion(
      quotas, static_cast<std::size_t>(std::llround(kHeldOutFraction * n)));
  std::size_t train_portion = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    quotas[c] = kValidationFraction *
                static_cast<double>(strata[c].size() - held[c]);
    train_portion += strata[c].size() - held[c];
  }
  const auto val = Apportion(
      quotas, static_cast<std::size_t>(
                  std::llround(kValidationFraction * train_portion)));

  SplitAssignment split;
  split.seed = seed;
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<std::size_t>& members = strata[c];
    std::size_t h = held[c];
    std::size_t v = val[c];
    if (members.size() >= 3) {
      h = std::max<std::size_t>(h, 1);
      v = std::max<std::size_t>(v, 1);
    }
    Rng rng(DeriveSeed(seed, {kSplitStream, c}));
    rng.Shuffle(members);
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k < h) {
        split.held_out.push_back(members[k]);
      } else if (k < h + v) {
        split.validation.push_back(members[k]);
      } else {
        split.train.push_back(members[k]);
      }
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.held_out.begin(), split.held_out.end());
  return split;
}

TabularDataset Standardize(const TabularDataset& data,
                           const SplitAssignment& split) {
  if (split.train.empty()) {
    throw Error(ErrorCode::kEmptyInput, "train part is empty");
  }
  TabularDataset out = data;
  out.encoding_stats.clear();
  const double count = static_cast<double>(split.train.size());
  for (const auto& group : data.feature_groups) {
    if (group.kind != FeatureKind::kNumeric) continue;
    const std::size_t c = group.begin;
    double sum = 0.0;
    for (const std::size_t r : split.train) sum += data.x(r, c);
    const double mean = sum / count;
    double squares = 0.0;
    for (const std::size_t r : split.train) {
      const double d = data.x(r, c) - mean;
      squares += d * d;
    }
    const double stddev = std::sqrt(squares / count);
    const bool constant = !(stddev > 1e-12 * std::max(1.0, std::abs(mean)));
    for (std::size_t r = 0; r < data.size(); ++r) {
      out.x(r, c) = constant ? 0.0 : (data.x(r, c) - mean) / stddev;
    }
    out.encoding_stats.push_back({c, mean, constant ? 0.0 : stddev});
  }
  return out;
}

Partition PartitionDataset(const TabularDataset& raw, std::uint64_t seed) {
  Partition p;
  p.split = SplitDataset(raw, seed);
  p.data = Standardize(raw, p.split);
  return p;
}

std::vector<std::size_t> Slice(const TabularDataset& data,
                               std::span<const std::size_t> indices,
                               GroupFilter group, LabelFilter label) {
  std::vector<std::size_t> out;
  for (const std::size_t i : indices) {
    if (i >= data.size()) {
      throw Error(ErrorCode::kInvalidArgument, "row index out of range");
    }
    const bool group_ok = group == GroupFilter::kAll ||
                          (group == GroupFilter::kDisadvantaged) == (data.s[i] == 1);
    const bool label_ok = label == LabelFilter::kAll ||
                          (label == LabelFilter::kPositive) == (data.y[i] == 1);
    if (group_ok && label_ok) out.push_back(i);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kSliceEmpty, "slice selects no rows");
  }
  return out;
}

std::vector<std::size_t> Slice(const TabularDataset& data,
                               const SplitAssignment& split, Part part,
                               GroupFilter group, LabelFilter label) {
  return Slice(data, split.part(part), group, label);
}

std::string_view PartName(Part part) {
  switch (part) {
    case Part::kTrain: return "train";
    case Part::kValidation: return "validation";
    case Part::kHeldOut: return "held_out";
  }
  return "held_out";
}

Part ParsePart(std::string_view name) {
  if (name == "train") return Part::kTrain;
  if (name == "validation") return Part::kValidation;
  if (name == "held_out" || name == "held-out") return Part::kHeldOut;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown part '" + std::string(name) + "'");
}

}  // namespace vaudit
