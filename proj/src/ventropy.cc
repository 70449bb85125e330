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

#include "vaudit/ventropy.h"

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

double Pve(const Predictor& predictor, std::span<const double> x,
           std::uint8_t y) {
  if (y > 1) throw Error(ErrorCode::kInvalidArgument, "label must be 0 or 1");
  return ClampedPve(ForwardProba(predictor, x), y);
}

std::string PveTable::ToCsv() const {
  std::string out = "instance_index,S,Y,pve_bits\n";
  for (const PveRow& row : rows) {
    out += std::to_string(row.index) + "," + std::to_string(row.s) + "," +
           std::to_string(row.y) + "," + csv::FormatDouble(row.pve) + "\n";
  }
  return out;
}

void PveTable::WriteCsv(const std::filesystem::path& path) const {
  csv::WriteFile(path, ToCsv());
}

PveTable BuildPveTable(const Predictor& predictor, const TabularDataset& data,
                       std::span<const std::size_t> indices) {
  PveTable table;
  table.family = predictor.family();
  table.depth = static_cast<int>(predictor.depth());
  table.rows.reserve(indices.size());
  Evaluator evaluator(predictor);
  for (const std::size_t i : indices) {
    const std::uint8_t y = data.y[i];
    table.rows.push_back(
        {i, data.s[i], y, ClampedPve(evaluator.Proba(data.x.row(i)), y)});
  }
  return table;
}

double EstimateVEntropy(const PveTable& table) {
  if (table.rows.empty()) throw Error(ErrorCode::kEmptyInput, "empty table");
  double sum = 0.0;
  for (const PveRow& row : table.rows) sum += row.pve;
  return sum / static_cast<double>(table.rows.size());
}

std::string_view NotionName(FairnessNotion notion) {
  return notion == FairnessNotion::kIndependence ? "independence"
                                                 : "separation";
}

nlohmann::json DrEstimate::ToJson() const {
  return {{"family", family},
          {"notion", NotionName(notion)},
          {"dr", dr},
          {"abs_dr", abs_dr},
          {"mean_pve_advantaged", mean_advantaged},
          {"mean_pve_disadvantaged", mean_disadvantaged},
          {"n_advantaged", n_advantaged},
          {"n_disadvantaged", n_disadvantaged}};
}

DrEstimate ComputeDr(const PveTable& table, FairnessNotion notion) {
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (const PveRow& row : table.rows) {
    if (notion == FairnessNotion::kSeparation && row.y != 1) continue;
    sum[row.s] += row.pve;
    ++count[row.s];
  }
  if (count[0] == 0 || count[1] == 0) {
    throw Error(ErrorCode::kSliceEmpty,
                std::string(NotionName(notion)) +
                    " DR needs both groups in the slice");
  }
  DrEstimate est;
  est.family = table.family;
  est.notion = notion;
  est.mean_advantaged = sum[0] / static_cast<double>(count[0]);
  est.mean_disadvantaged = sum[1] / static_cast<double>(count[1]);
  est.dr = est.mean_advantaged - est.mean_disadvantaged;
  est.abs_dr = std::abs(est.dr);
  est.n_advantaged = count[0];
  est.n_disadvantaged = count[1];
  return est;
}

DrEstimate DrIndependence(const PveTable& table) {
  return ComputeDr(table, FairnessNotion::kIndependence);
}

DrEstimate DrSeparation(const PveTable& table) {
  return ComputeDr(table, FairnessNotion::kSeparation);
}

}  // namespace vaudit
