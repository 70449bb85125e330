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

#include "vaudit/ur.h"

#include <algorithm>
#include <cmath>

#include "csv.h"
#include "vaudit/error.h"

namespace vaudit {
namespace {

double ClampedPve(const Probabilities& p, std::uint8_t y) {
  return -std::log2(std::max(p[y], kProbabilityFloor));
}

}  // namespace

std::vector<MaskSpec> FeatureMasks(const TabularDataset& data) {
  std::vector<MaskSpec> masks;
  for (const FeatureGroup& group : data.feature_groups) {
    masks.push_back({group.name, MaskKind::kZeroFill, group.begin, group.end});
  }
  return masks;
}

double UncertaintyReduction(const Predictor& predictor,
                            const TabularDataset& data,
                            std::span<const std::size_t> indices,
                            const MaskSpec& mask) {
  if (indices.empty()) {
    throw Error(ErrorCode::kSliceEmpty, "UR needs a non-empty slice");
  }
  if (data.encoded_dim() != predictor.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset and predictor widths differ");
  }
  if (mask.begin > mask.end || mask.end > data.encoded_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask span outside the encoded columns");
  }
  Evaluator evaluator(predictor);
  std::vector<double> masked(data.encoded_dim());
  double sum = 0.0;
  for (const std::size_t i : indices) {
    const std::span<const double> x = data.x.row(i);
    std::copy(x.begin(), x.end(), masked.begin());
    std::fill(masked.begin() + static_cast<std::ptrdiff_t>(mask.begin),
              masked.begin() + static_cast<std::ptrdiff_t>(mask.end), 0.0);
    const std::uint8_t y = data.y[i];
    const double with_mask = ClampedPve(evaluator.Proba(masked), y);
    const double without = ClampedPve(evaluator.Proba(x), y);
    sum += with_mask - without;
  }
  return sum / static_cast<double>(indices.size());
}

nlohmann::json UrResult::ToJson() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const UrRow& row : rows) {
    entries.push_back({{"feature", row.feature},
                       {"ur_bits", row.ur},
                       {"slice_size", row.slice_size}});
  }
  return {{"family", family},
          {"slice", {{"group", group}, {"label", label}}},
          {"features", entries}};
}

std::string UrResult::ToCsv() const {
  std::string out = "feature,ur_bits,slice_size\n";
  for (const UrRow& row : rows) {
    out += csv::Escape(row.feature) + "," + csv::FormatDouble(row.ur) + "," +
           std::to_string(row.slice_size) + "\n";
  }
  return out;
}

void UrResult::WriteCsv(const std::filesystem::path& path) const {
  csv::WriteFile(path, ToCsv());
}

UrResult RankFeatures(const Predictor& predictor, const TabularDataset& data,
                      std::span<const std::size_t> indices,
                      std::span<const MaskSpec> masks, std::size_t top_k) {
  if (masks.empty()) throw Error(ErrorCode::kEmptyInput, "no masks to rank");
  UrResult result;
  result.family = predictor.family();
  result.group = "all";
  result.label = "all";
  for (const MaskSpec& mask : masks) {
    result.rows.push_back({mask.feature,
                           UncertaintyReduction(predictor, data, indices, mask),
                           indices.size()});
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const UrRow& a, const UrRow& b) {
              if (a.ur != b.ur) return a.ur > b.ur;
              return a.feature < b.feature;
            });
  if (result.rows.size() > top_k) result.rows.resize(top_k);
  return result;
}

}  // namespace vaudit
