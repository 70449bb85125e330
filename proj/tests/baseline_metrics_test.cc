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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "test_util.h"

namespace vaudit {
namespace {

using Bits = std::vector<std::uint8_t>;

// Builds S/Y vectors from a 2x2 table n[s][y].
void FromTable(long n11, long n10, long n01, long n00, Bits& s, Bits& y) {
  s.clear();
  y.clear();
  const long counts[2][2] = {{n00, n01}, {n10, n11}};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (long k = 0; k < counts[a][b]; ++k) {
        s.push_back(static_cast<std::uint8_t>(a));
        y.push_back(static_cast<std::uint8_t>(b));
      }
    }
  }
}

TEST(ClassImbalanceTest, Examples) {
  EXPECT_EQ(ClassImbalance(Bits{0, 1, 0, 1}), 0.0);
  EXPECT_EQ(ClassImbalance(Bits{1, 1, 1, 0}), -0.5);
  EXPECT_VAUDIT_ERROR(ClassImbalance(Bits{}), ErrorCode::kEmptyInput);
}

TEST(DplTest, Examples) {
  EXPECT_EQ(Dpl(Bits{0, 0, 1, 1}, Bits{1, 0, 1, 0}), 0.0);
  EXPECT_EQ(Dpl(Bits{0, 0, 1, 1}, Bits{1, 0, 0, 0}), 0.5);
  EXPECT_VAUDIT_ERROR(Dpl(Bits{0, 0}, Bits{1, 0}), ErrorCode::kSliceEmpty);
}

TEST(PhiTest, Examples) {
  Bits s, y;
  FromTable(2, 4, 3, 6, s, y);  // product form: 2*6 == 4*3
  EXPECT_EQ(PhiCoefficient(s, y), 0.0);
  FromTable(1, 3, 3, 1, s, y);
  EXPECT_DOUBLE_EQ(PhiCoefficient(s, y), -0.5);
  FromTable(2, 3, 0, 0, s, y);
  EXPECT_VAUDIT_ERROR(PhiCoefficient(s, y), ErrorCode::kDegenerateMargin);
}

TEST(KlTest, Examples) {
  Bits s, y;
  FromTable(3, 7, 3, 7, s, y);
  EXPECT_EQ(KlLabelDivergence(s, y), 0.0);
  // P_a = Bernoulli(0.8), P_d = Bernoulli(0.5).
  FromTable(5, 5, 8, 2, s, y);
  const double expected = 0.8 * std::log2(0.8 / 0.5) + 0.2 * std::log2(0.2 / 0.5);
  EXPECT_NEAR(KlLabelDivergence(s, y), expected, 1e-12);
  // Advantaged has negatives, disadvantaged has none.
  FromTable(4, 0, 2, 2, s, y);
  EXPECT_VAUDIT_ERROR(KlLabelDivergence(s, y), ErrorCode::kInfiniteDivergence);
  // The reverse mismatch is a 0 log 0 term.
  FromTable(2, 2, 4, 0, s, y);
  EXPECT_NO_THROW(KlLabelDivergence(s, y));
}

TEST(MajorityClassTest, Examples) {
  EXPECT_EQ(MajorityClass(Bits{1, 1, 0}), ClassLabel::kPositive);
  EXPECT_EQ(MajorityClass(Bits{0, 0, 1}), ClassLabel::kNegative);
  EXPECT_EQ(MajorityClass(Bits{1, 0}), ClassLabel::kNegative);
}

// Properties on random tables: oracle agreement, swap antisymmetry of CIm
// and DPL, and invariance under row permutation.
TEST(BaselineMetricsTest, RandomProperties) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + gen() % 480;
    Bits s, y;
    oracle::Counts c;
    do {
      s.clear();
      y.clear();
      for (std::size_t i = 0; i < n; ++i) {
        s.push_back(gen() % 3 == 0);
        y.push_back(gen() % 2);
      }
      c = oracle::Count(s, y);
    } while (!c.n[0][0] || !c.n[0][1] || !c.n[1][0] || !c.n[1][1]);

    const BaselineMetrics m = ComputeBaselineMetrics(s, y);
    EXPECT_EQ(m.cim, oracle::Cim(c));
    EXPECT_EQ(m.dpl, oracle::Dpl(c));
    EXPECT_NEAR(m.r_phi, oracle::PearsonBinary(s, y), 1e-12);
    EXPECT_NEAR(m.kl, oracle::KlBits(c), 1e-12);

    Bits swapped = s;
    for (auto& v : swapped) v = 1 - v;
    EXPECT_EQ(ClassImbalance(swapped), -m.cim);
    EXPECT_EQ(Dpl(swapped, y), -m.dpl);
    EXPECT_NEAR(PhiCoefficient(swapped, y), -m.r_phi, 1e-15);

    Bits ps = s, py = y;
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = gen() % (i + 1);
      std::swap(ps[i], ps[j]);
      std::swap(py[i], py[j]);
    }
    const BaselineMetrics p = ComputeBaselineMetrics(ps, py);
    EXPECT_EQ(p.cim, m.cim);
    EXPECT_EQ(p.dpl, m.dpl);
    EXPECT_EQ(p.r_phi, m.r_phi);
    EXPECT_EQ(p.kl, m.kl);
  }
}

TEST(BaselineMetricsTest, LengthMismatch) {
  EXPECT_VAUDIT_ERROR(Dpl(Bits{0, 1}, Bits{1}), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace vaudit
