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

#include "vaudit/disparity.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "csv.h"
#include "vaudit/error.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

constexpr std::uint64_t kDownstreamStream = 0xd0d0;

// Positive-prediction rates per group; `positives_only` restricts to Y = 1.
double RateGap(const TabularDataset& data, std::span<const std::size_t> indices,
               std::span<const std::uint8_t> predictions, bool positives_only) {
  if (indices.size() != predictions.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "predictions and indices differ in length");
  }
  std::size_t hits[2] = {0, 0};
  std::size_t count[2] = {0, 0};
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    if (positives_only && data.y[i] != 1) continue;
    ++count[data.s[i]];
    hits[data.s[i]] += predictions[k] == 1;
  }
  if (count[0] == 0 || count[1] == 0) {
    throw Error(ErrorCode::kSliceEmpty,
                positives_only ? "EQOPP needs positives in both groups"
                               : "DEMP needs rows from both groups");
  }
  return static_cast<double>(hits[0]) / static_cast<double>(count[0]) -
         static_cast<double>(hits[1]) / static_cast<double>(count[1]);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::uint8_t HardPredict(const Probabilities& p) { return p[1] > p[0] ? 1 : 0; }

std::uint8_t HardPredict(const Predictor& predictor,
                         std::span<const double> x) {
  return HardPredict(ForwardProba(predictor, x));
}

std::vector<std::uint8_t> PredictRows(const Predictor& predictor,
                                      const TabularDataset& data,
                                      std::span<const std::size_t> indices) {
  Evaluator evaluator(predictor);
  std::vector<std::uint8_t> out;
  out.reserve(indices.size());
  for (const std::size_t i : indices) {
    out.push_back(HardPredict(evaluator.Proba(data.x.row(i))));
  }
  return out;
}

double DempFromPredictions(const TabularDataset& data,
                           std::span<const std::size_t> indices,
                           std::span<const std::uint8_t> predictions) {
  return RateGap(data, indices, predictions, false);
}

double EqoppFromPredictions(const TabularDataset& data,
                            std::span<const std::size_t> indices,
                            std::span<const std::uint8_t> predictions) {
  return RateGap(data, indices, predictions, true);
}

double Demp(const Predictor& predictor, const TabularDataset& data,
            std::span<const std::size_t> indices) {
  return DempFromPredictions(data, indices,
                             PredictRows(predictor, data, indices));
}

double Eqopp(const Predictor& predictor, const TabularDataset& data,
             std::span<const std::size_t> indices) {
  return EqoppFromPredictions(data, indices,
                              PredictRows(predictor, data, indices));
}

double DisparityResult::AverageMagnitude(FairnessNotion notion) const {
  return notion == FairnessNotion::kIndependence ? avg_abs_demp
                                                 : avg_abs_eqopp;
}

nlohmann::json DisparityResult::ToJson() const {
  nlohmann::json depths = nlohmann::json::array();
  for (const auto& d : per_depth) {
    depths.push_back({{"depth", d.depth},
                      {"demp", d.demp},
                      {"eqopp", d.eqopp},
                      {"selected_epoch", d.selected_epoch},
                      {"fallback_triggered", d.fallback_triggered}});
  }
  return {{"family", family},
          {"per_depth", depths},
          {"avg_demp", avg_demp},
          {"avg_eqopp", avg_eqopp},
          {"avg_abs_demp", avg_abs_demp},
          {"avg_abs_eqopp", avg_abs_eqopp}};
}

std::string DisparityResult::CsvRows() const {
  std::string out;
  for (const auto& d : per_depth) {
    out += csv::Escape(family) + "," + std::to_string(d.depth) + "," +
           csv::FormatDouble(d.demp) + "," + csv::FormatDouble(d.eqopp) + "\n";
  }
  return out;
}

DisparityResult SimulateDownstream(const FamilySpec& spec,
                                   const TabularDataset& data,
                                   const SplitAssignment& split,
                                   const TrainConfig& config) {
  spec.Validate();
  DisparityResult result;
  result.family = spec.name;
  for (std::size_t k = 0; k < spec.depth_grid.size(); ++k) {
    const int depth = spec.depth_grid[k];
    TrainConfig depth_config = config;
    depth_config.seed = DeriveSeed(config.seed, {kDownstreamStream, k});
    const TrainResult trained =
        TrainInfimum(spec, depth, data, split, depth_config);
    const std::vector<std::uint8_t> predictions =
        PredictRows(trained.predictor, data, split.held_out);
    DepthDisparity d;
    d.depth = depth;
    d.demp = DempFromPredictions(data, split.held_out, predictions);
    d.eqopp = EqoppFromPredictions(data, split.held_out, predictions);
    d.selected_epoch = trained.trace.selected_epoch;
    d.fallback_triggered = trained.trace.fallback_triggered;
    result.per_depth.push_back(d);
  }
  const double n = static_cast<double>(result.per_depth.size());
  for (const auto& d : result.per_depth) {
    result.avg_demp += d.demp;
    result.avg_eqopp += d.eqopp;
    result.avg_abs_demp += std::abs(d.demp);
    result.avg_abs_eqopp += std::abs(d.eqopp);
  }
  result.avg_demp /= n;
  result.avg_eqopp /= n;
  result.avg_abs_demp /= n;
  result.avg_abs_eqopp /= n;
  return result;
}

std::string_view RelationName(Relation relation) {
  return relation == Relation::kDirect ? "direct" : "inverse";
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kInconsistent: return "inconsistent";
    case Verdict::kInsufficientFamilies: return "insufficient_families";
  }
  return "insufficient_families";
}

std::string_view ClassLabelName(ClassLabel label) {
  return label == ClassLabel::kPositive ? "positive" : "negative";
}

Relation RuleOfThumbExpected(FairnessNotion notion, ClassLabel majority) {
  if (notion == FairnessNotion::kSeparation) return Relation::kDirect;
  return majority == ClassLabel::kPositive ? Relation::kDirect
                                           : Relation::kInverse;
}

double SpearmanRho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "rank inputs differ in length");
  }
  if (a.size() < 2) return 0.0;
  const std::vector<double> ra = AverageRanks(a);
  const std::vector<double> rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

nlohmann::json RuleVerdict::ToJson() const {
  return {{"notion", NotionName(notion)},
          {"majority_class", ClassLabelName(majority)},
          {"expected_relation", RelationName(expected)},
          {"spearman_rho", rho},
          {"verdict", VerdictName(verdict)},
          {"families_compared", families_compared},
          {"riskiest_family", riskiest_family}};
}

std::vector<RuleVerdict> EvaluateRules(std::span<const FamilyDr> dr_estimates,
                                       std::span<const DisparityResult> results,
                                       ClassLabel majority) {
  std::map<std::string, const DisparityResult*> by_family;
  for (const auto& r : results) by_family[r.family] = &r;
  std::set<std::string> dr_names;
  for (const auto& d : dr_estimates) dr_names.insert(d.family);
  if (dr_names.size() != dr_estimates.size() ||
      by_family.size() != results.size() || dr_names.size() != by_family.size() ||
      !std::equal(dr_names.begin(), dr_names.end(), by_family.begin(),
                  [](const std::string& a, const auto& b) { return a == b.first; })) {
    throw Error(ErrorCode::kMismatchedFamilies,
                "DR estimates and disparity results name different families");
  }
  if (dr_estimates.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no families to compare");
  }

  std::vector<RuleVerdict> verdicts;
  for (const FairnessNotion notion :
       {FairnessNotion::kIndependence, FairnessNotion::kSeparation}) {
    RuleVerdict v;
    v.notion = notion;
    v.majority = majority;
    v.expected = RuleOfThumbExpected(notion, majority);
    std::vector<double> risk;
    std::vector<double> disparity;
    double best = 0.0;
    for (const FamilyDr& d : dr_estimates) {
      const auto& estimate = d.For(notion);
      if (!estimate) continue;
      const double abs_dr = estimate->abs_dr;
      const bool better = v.expected == Relation::kDirect ? abs_dr > best
                                                          : abs_dr < best;
      if (risk.empty() || better) {
        best = abs_dr;
        v.riskiest_family = d.family;
      }
      risk.push_back(abs_dr);
      disparity.push_back(by_family.at(d.family)->AverageMagnitude(notion));
    }
    v.families_compared = risk.size();
    v.rho = SpearmanRho(risk, disparity);
    if (risk.size() < kMinFamiliesForVerdict) {
      v.verdict = Verdict::kInsufficientFamilies;
    } else {
      const double signed_rho = v.expected == Relation::kDirect ? v.rho : -v.rho;
      v.verdict = signed_rho >= kConsistencyRho ? Verdict::kConsistent
                                                : Verdict::kInconsistent;
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

}  // namespace vaudit
