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

#include "vaudit/baseline_metrics.h"

#include <cmath>

#include "vaudit/error.h"

namespace vaudit {
namespace {

// counts[s][y]
struct Contingency {
  double counts[2][2] = {{0, 0}, {0, 0}};

  double group(int s) const { return counts[s][0] + counts[s][1]; }
  double label(int y) const { return counts[0][y] + counts[1][y]; }
  double total() const { return group(0) + group(1); }
};

Contingency Tabulate(BinarySpan s, BinarySpan y) {
  if (s.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "S and Y lengths differ");
  }
  if (s.empty()) throw Error(ErrorCode::kEmptyInput, "no rows");
  Contingency table;
  for (std::size_t i = 0; i < s.size(); ++i) {
    table.counts[s[i] != 0][y[i] != 0] += 1.0;
  }
  return table;
}

void RequireBothGroups(const Contingency& table) {
  if (table.group(0) == 0.0 || table.group(1) == 0.0) {
    throw Error(ErrorCode::kSliceEmpty, "one sensitive group has no rows");
  }
}

// p * log2(p / q) with the 0 log 0 = 0 convention.
double KlTerm(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) {
    throw Error(ErrorCode::kInfiniteDivergence,
                "advantaged label mass where the disadvantaged group has none");
  }
  return p * std::log2(p / q);
}

}  // namespace

nlohmann::json BaselineMetrics::ToJson() const {
  return {{"cim", cim}, {"dpl", dpl}, {"r_phi", r_phi}, {"kl", kl}};
}

double ClassImbalance(BinarySpan s) {
  if (s.empty()) throw Error(ErrorCode::kEmptyInput, "no rows");
  double disadvantaged = 0.0;
  for (const auto v : s) disadvantaged += v != 0;
  const double n = static_cast<double>(s.size());
  return ((n - disadvantaged) - disadvantaged) / n;
}

double Dpl(BinarySpan s, BinarySpan y) {
  const Contingency t = Tabulate(s, y);
  RequireBothGroups(t);
  return t.counts[0][1] / t.group(0) - t.counts[1][1] / t.group(1);
}

double PhiCoefficient(BinarySpan s, BinarySpan y) {
  const Contingency t = Tabulate(s, y);
  const double margins = t.group(1) * t.group(0) * t.label(1) * t.label(0);
  if (margins == 0.0) {
    throw Error(ErrorCode::kDegenerateMargin,
                "phi needs both values of S and of Y");
  }
  const double numerator =
      t.counts[1][1] * t.counts[0][0] - t.counts[1][0] * t.counts[0][1];
  return numerator / std::sqrt(margins);
}

double KlLabelDivergence(BinarySpan s, BinarySpan y) {
  const Contingency t = Tabulate(s, y);
  RequireBothGroups(t);
  const double na = t.group(0);
  const double nd = t.group(1);
  return KlTerm(t.counts[0][1] / na, t.counts[1][1] / nd) +
         KlTerm(t.counts[0][0] / na, t.counts[1][0] / nd);
}

ClassLabel MajorityClass(BinarySpan y) {
  std::size_t positives = 0;
  for (const auto v : y) positives += v != 0;
  return 2 * positives > y.size() ? ClassLabel::kPositive
                                  : ClassLabel::kNegative;
}

BaselineMetrics ComputeBaselineMetrics(BinarySpan s, BinarySpan y) {
  BaselineMetrics m;
  m.cim = ClassImbalance(s);
  m.dpl = Dpl(s, y);
  m.r_phi = PhiCoefficient(s, y);
  m.kl = KlLabelDivergence(s, y);
  return m;
}

}  // namespace vaudit
