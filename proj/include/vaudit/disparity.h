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

// Downstream disparities of trained models (demographic parity and equal
// opportunity gaps) and the rules of thumb relating them to DR.

#ifndef VAUDIT_DISPARITY_H_
#define VAUDIT_DISPARITY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaudit/baseline_metrics.h"
#include "vaudit/dataset.h"
#include "vaudit/family.h"
#include "vaudit/trainer.h"
#include "vaudit/ventropy.h"

namespace vaudit {

// Argmax over the two classes; an exact tie predicts 0.
std::uint8_t HardPredict(const Probabilities& p);
std::uint8_t HardPredict(const Predictor& predictor, std::span<const double> x);

// Hard predictions for data rows `indices`, aligned with `indices`.
std::vector<std::uint8_t> PredictRows(const Predictor& predictor,
                                      const TabularDataset& data,
                                      std::span<const std::size_t> indices);

// P(h=1 | S=0) - P(h=1 | S=1) over the rows; `predictions` aligned with
// `indices`.
double DempFromPredictions(const TabularDataset& data,
                           std::span<const std::size_t> indices,
                           std::span<const std::uint8_t> predictions);

// P(h=1 | S=0, Y=1) - P(h=1 | S=1, Y=1).
double EqoppFromPredictions(const TabularDataset& data,
                            std::span<const std::size_t> indices,
                            std::span<const std::uint8_t> predictions);

double Demp(const Predictor& predictor, const TabularDataset& data,
            std::span<const std::size_t> indices);
double Eqopp(const Predictor& predictor, const TabularDataset& data,
             std::span<const std::size_t> indices);

struct DepthDisparity {
  int depth = 0;
  double demp = 0.0;
  double eqopp = 0.0;
  int selected_epoch = 0;
  bool fallback_triggered = false;
};

struct DisparityResult {
  std::string family;
  std::vector<DepthDisparity> per_depth;
  double avg_demp = 0.0;
  double avg_eqopp = 0.0;
  double avg_abs_demp = 0.0;
  double avg_abs_eqopp = 0.0;

  // Average |disparity| for the metric tied to `notion`.
  double AverageMagnitude(FairnessNotion notion) const;

  nlohmann::json ToJson() const;
  // family,depth,demp,eqopp rows (no header).
  std::string CsvRows() const;
};

inline constexpr const char* kDisparityCsvHeader = "family,depth,demp,eqopp\n";

// Trains one model per depth of the grid (fresh derived seed per depth) and
// measures DEMP/EQOPP on the held-out part.
DisparityResult SimulateDownstream(const FamilySpec& spec,
                                   const TabularDataset& data,
                                   const SplitAssignment& split,
                                   const TrainConfig& config);

enum class Relation { kDirect, kInverse };
enum class Verdict { kConsistent, kInconsistent, kInsufficientFamilies };

std::string_view RelationName(Relation relation);
std::string_view VerdictName(Verdict verdict);
std::string_view ClassLabelName(ClassLabel label);

// Separation is always direct; independence is direct when the majority
// class is positive and inverse when it is negative.
Relation RuleOfThumbExpected(FairnessNotion notion, ClassLabel majority);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either input has no rank variance.
double SpearmanRho(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kMinFamiliesForVerdict = 3;
inline constexpr double kConsistencyRho = 0.5;

struct FamilyDr {
  std::string family;
  std::optional<DrEstimate> independence;
  std::optional<DrEstimate> separation;

  const std::optional<DrEstimate>& For(FairnessNotion notion) const {
    return notion == FairnessNotion::kIndependence ? independence : separation;
  }
};

struct RuleVerdict {
  FairnessNotion notion = FairnessNotion::kSeparation;
  ClassLabel majority = ClassLabel::kNegative;
  Relation expected = Relation::kDirect;
  double rho = 0.0;
  Verdict verdict = Verdict::kInsufficientFamilies;
  std::size_t families_compared = 0;
  // Highest predicted risk: max |DR| under a direct rule, min |DR| under an
  // inverse one. Empty when no family has a defined DR for the notion.
  std::string riskiest_family;

  nlohmann::json ToJson() const;
};

// One verdict per notion (independence first). Families whose DR for a
// notion is undefined are left out of that notion's comparison. Throws
// Error(kMismatchedFamilies) unless both inputs name the same families.
std::vector<RuleVerdict> EvaluateRules(std::span<const FamilyDr> dr_estimates,
                                       std::span<const DisparityResult> results,
                                       ClassLabel majority);

}  // namespace vaudit

#endif  // VAUDIT_DISPARITY_H_
