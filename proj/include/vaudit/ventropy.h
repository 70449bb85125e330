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

// Pointwise V-entropy of held-out instances under a family's trained
// infimum, the empirical V-entropy, and the group uncertainty difference DR.
//
// All quantities are in bits. DR is advantaged minus disadvantaged: a
// negative DR means the disadvantaged group is harder to predict.

#ifndef VAUDIT_VENTROPY_H_
#define VAUDIT_VENTROPY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaudit/dataset.h"
#include "vaudit/family.h"

namespace vaudit {

// -log2(max(h[x](y), 1e-12)).
double Pve(const Predictor& predictor, std::span<const double> x,
           std::uint8_t y);

struct PveRow {
  std::size_t index = 0;
  std::uint8_t s = 0;
  std::uint8_t y = 0;
  double pve = 0.0;
};

struct PveTable {
  std::string family;
  int depth = 0;
  std::vector<PveRow> rows;

  // instance_index,S,Y,pve_bits
  std::string ToCsv() const;
  void WriteCsv(const std::filesystem::path& path) const;
};

// Scores every row in `indices` (normally the held-out part) in order.
PveTable BuildPveTable(const Predictor& predictor, const TabularDataset& data,
                       std::span<const std::size_t> indices);

// Arithmetic mean of the pve column in row order.
double EstimateVEntropy(const PveTable& table);

enum class FairnessNotion { kIndependence, kSeparation };

std::string_view NotionName(FairnessNotion notion);

struct DrEstimate {
  std::string family;
  FairnessNotion notion = FairnessNotion::kIndependence;
  double dr = 0.0;
  double abs_dr = 0.0;
  double mean_advantaged = 0.0;
  double mean_disadvantaged = 0.0;
  std::size_t n_advantaged = 0;
  std::size_t n_disadvantaged = 0;

  nlohmann::json ToJson() const;
};

// Throws Error(kSliceEmpty) when either group slice is empty.
DrEstimate DrIndependence(const PveTable& table);

// As DrIndependence restricted to Y = 1 rows.
DrEstimate DrSeparation(const PveTable& table);

DrEstimate ComputeDr(const PveTable& table, FairnessNotion notion);

}  // namespace vaudit

#endif  // VAUDIT_VENTROPY_H_
