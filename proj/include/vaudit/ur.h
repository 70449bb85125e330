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

// Uncertainty reduction: how much the pointwise V-entropy of a slice rises
// when one feature is masked, scored with the same trained predictor for the
// masked and unmasked inputs.

#ifndef VAUDIT_UR_H_
#define VAUDIT_UR_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaudit/dataset.h"
#include "vaudit/family.h"

namespace vaudit {

enum class MaskKind { kZeroFill };

struct MaskSpec {
  std::string feature;
  MaskKind kind = MaskKind::kZeroFill;
  std::size_t begin = 0;  // encoded column span [begin, end)
  std::size_t end = 0;
};

// One zero-fill mask per feature group (whole one-hot span for categoricals).
std::vector<MaskSpec> FeatureMasks(const TabularDataset& data);

// Mean over `indices` of PVE(masked x) - PVE(x). May be negative.
double UncertaintyReduction(const Predictor& predictor,
                            const TabularDataset& data,
                            std::span<const std::size_t> indices,
                            const MaskSpec& mask);

struct UrRow {
  std::string feature;
  double ur = 0.0;
  std::size_t slice_size = 0;
};

struct UrResult {
  std::string family;
  std::string group;  // advantaged | disadvantaged | all
  std::string label;  // positive | negative | all
  std::vector<UrRow> rows;  // descending by ur, ties by feature name

  nlohmann::json ToJson() const;
  // feature,ur_bits,slice_size
  std::string ToCsv() const;
  void WriteCsv(const std::filesystem::path& path) const;
};

UrResult RankFeatures(const Predictor& predictor, const TabularDataset& data,
                      std::span<const std::size_t> indices,
                      std::span<const MaskSpec> masks, std::size_t top_k);

}  // namespace vaudit

#endif  // VAUDIT_UR_H_
