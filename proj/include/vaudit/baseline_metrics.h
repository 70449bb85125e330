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

// Data-focused bias indicators computed from (S, Y) alone. Conventions
// follow SageMaker Clarify: S=0 is the advantaged group, S=1 the
// disadvantaged one, and every divergence is in bits.

#ifndef VAUDIT_BASELINE_METRICS_H_
#define VAUDIT_BASELINE_METRICS_H_

#include <cstdint>
#include <span>

#include "json.hpp"

namespace vaudit {

using BinarySpan = std::span<const std::uint8_t>;

enum class ClassLabel { kNegative, kPositive };

struct BaselineMetrics {
  double cim = 0.0;
  double dpl = 0.0;
  double r_phi = 0.0;
  double kl = 0.0;

  nlohmann::json ToJson() const;
};

// (n_a - n_d) / n.
double ClassImbalance(BinarySpan s);

// P(Y=1 | S=0) - P(Y=1 | S=1).
double Dpl(BinarySpan s, BinarySpan y);

// Phi coefficient of the 2x2 (S, Y) table with S=1 and Y=1 as the "1"
// margins. Throws kDegenerateMargin when any margin is empty.
double PhiCoefficient(BinarySpan s, BinarySpan y);

// KL(P_a || P_d) in bits between the per-group Bernoulli label laws.
double KlLabelDivergence(BinarySpan s, BinarySpan y);

// Ties resolve to kNegative.
ClassLabel MajorityClass(BinarySpan y);

BaselineMetrics ComputeBaselineMetrics(BinarySpan s, BinarySpan y);

}  // namespace vaudit

#endif  // VAUDIT_BASELINE_METRICS_H_
