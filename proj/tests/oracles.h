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

// Independent reference implementations shared by the unit and acceptance
// tests. Nothing here calls into the library's numeric code.

#ifndef VAUDIT_TESTS_ORACLES_H_
#define VAUDIT_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vaudit/dataset.h"
#include "vaudit/family.h"

namespace vaudit::oracle {

struct Counts {
  // n[s][y]
  long n[2][2] = {{0, 0}, {0, 0}};
};

inline Counts Count(const std::vector<std::uint8_t>& s,
                    const std::vector<std::uint8_t>& y) {
  Counts c;
  for (std::size_t i = 0; i < s.size(); ++i) ++c.n[s[i]][y[i]];
  return c;
}

inline double Cim(const Counts& c) {
  const double na = static_cast<double>(c.n[0][0] + c.n[0][1]);
  const double nd = static_cast<double>(c.n[1][0] + c.n[1][1]);
  return (na - nd) / (na + nd);
}

inline double Dpl(const Counts& c) {
  const double na = static_cast<double>(c.n[0][0] + c.n[0][1]);
  const double nd = static_cast<double>(c.n[1][0] + c.n[1][1]);
  return static_cast<double>(c.n[0][1]) / na - static_cast<double>(c.n[1][1]) / nd;
}

// Pearson correlation of the two 0/1 vectors from raw moments.
inline double PearsonBinary(const std::vector<std::uint8_t>& a,
                            const std::vector<std::uint8_t>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

// KL(P_a || P_d) over the label distribution, in bits, via natural logs.
inline double KlBits(const Counts& c) {
  const double na = static_cast<double>(c.n[0][0] + c.n[0][1]);
  const double nd = static_cast<double>(c.n[1][0] + c.n[1][1]);
  double kl = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double p = c.n[0][y] / na;
    const double q = c.n[1][y] / nd;
    if (p > 0) kl += p * (std::log(p) - std::log(q));
  }
  return kl / std::log(2.0);
}

// Positive-rate gap between groups by explicit counting.
inline double RateGap(const std::vector<std::uint8_t>& s,
                      const std::vector<std::uint8_t>& y,
                      const std::vector<std::uint8_t>& h, bool positives_only) {
  long pos[2] = {0, 0}, tot[2] = {0, 0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (positives_only && y[i] != 1) continue;
    ++tot[s[i]];
    pos[s[i]] += h[i];
  }
  return static_cast<double>(pos[0]) / static_cast<double>(tot[0]) -
         static_cast<double>(pos[1]) / static_cast<double>(tot[1]);
}

inline double Act(Activation a, double z) {
  switch (a) {
    case Activation::kLinear: return z;
    case Activation::kRelu: return std::max(z, 0.0);
    case Activation::kLeakyRelu: return z >= 0 ? z : 0.01 * z;
    case Activation::kSigmoid: return 0.5 * (1.0 + std::tanh(0.5 * z));
    case Activation::kGelu: {
      const double c = std::sqrt(2.0 / M_PI);
      return 0.5 * z * (1.0 + std::tanh(c * (z + 0.044715 * z * z * z)));
    }
  }
  return z;
}

// Straightforward forward pass over the flat parameter layout: per layer a
// row-major out x in weight block, then the biases. `pre` receives every
// hidden pre-activation when non-null.
template <typename Params>
std::array<double, 2> Forward(const Predictor& p, const Params& params,
                              const std::vector<double>& x,
                              std::vector<double>* pre = nullptr) {
  std::vector<double> h = x;
  const auto layers = p.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerShape& L = layers[l];
    std::vector<double> z(L.out);
    for (std::size_t j = 0; j < L.out; ++j) {
      double acc = params[L.bias_offset + j];
      for (std::size_t k = 0; k < L.in; ++k) {
        acc += params[L.weight_offset + j * L.in + k] * h[k];
      }
      z[j] = acc;
    }
    if (l + 1 < layers.size()) {
      if (pre) pre->insert(pre->end(), z.begin(), z.end());
      for (double& v : z) v = Act(p.activation(), v);
    }
    h = std::move(z);
  }
  const double m = std::max(h[0], h[1]);
  const double e0 = std::exp(h[0] - m), e1 = std::exp(h[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

// Mean clamped NLL in nats.
template <typename Params>
double MeanLoss(const Predictor& p, const Params& params, const Matrix& x,
                const std::vector<std::size_t>& rows,
                const std::vector<std::uint8_t>& labels) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto row = x.row(rows[k]);
    const std::vector<double> v(row.begin(), row.end());
    const auto pr = Forward(p, params, v);
    sum += -std::log(std::max(pr[labels[k]], 1e-12));
  }
  return sum / static_cast<double>(rows.size());
}

inline std::vector<double> CentralDifference(
    const Predictor& p, const Matrix& x, const std::vector<std::size_t>& rows,
    const std::vector<std::uint8_t>& labels, double step) {
  std::vector<double> theta(p.parameters().begin(), p.parameters().end());
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double keep = theta[i];
    theta[i] = keep + step;
    const double up = MeanLoss(p, theta, x, rows, labels);
    theta[i] = keep - step;
    const double down = MeanLoss(p, theta, x, rows, labels);
    theta[i] = keep;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

// Per-coordinate relative error with a floor on the denominator so that
// coordinates whose true gradient is ~0 are judged on absolute error.
inline double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Random network with parameters U(-1, 1)·scale plus a random batch.
struct GradientCase {
  Predictor predictor;
  Matrix x;
  std::vector<std::size_t> rows;
  std::vector<std::uint8_t> labels;
};

inline GradientCase MakeGradientCase(Activation a, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> dim(2, 6), depth(0, 3), width(2, 6),
      batch(1, 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::size_t> widths = {static_cast<std::size_t>(dim(gen))};
  const int d = depth(gen);
  for (int l = 0; l < d; ++l) widths.push_back(static_cast<std::size_t>(width(gen)));
  widths.push_back(2);
  GradientCase c{Predictor("V_test", a, widths), Matrix(), {}, {}};
  for (double& w : c.predictor.mutable_parameters()) w = u(gen);
  const std::size_t b = static_cast<std::size_t>(batch(gen));
  c.x = Matrix(b, widths.front());
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < widths.front(); ++j) c.x(i, j) = 1.5 * u(gen);
    c.rows.push_back(i);
    c.labels.push_back(static_cast<std::uint8_t>(gen() & 1));
  }
  return c;
}

// True when some hidden pre-activation lies within `margin` of the kink at
// zero, so a finite-difference probe could straddle it.
inline bool NearKink(const GradientCase& c, double margin) {
  const Activation a = c.predictor.activation();
  if (a != Activation::kRelu && a != Activation::kLeakyRelu) return false;
  const std::vector<double> theta(c.predictor.parameters().begin(),
                                  c.predictor.parameters().end());
  for (const std::size_t r : c.rows) {
    const auto row = c.x.row(r);
    std::vector<double> pre;
    Forward(c.predictor, theta, std::vector<double>(row.begin(), row.end()), &pre);
    for (const double z : pre) {
      if (std::abs(z) < margin) return true;
    }
  }
  return false;
}

}  // namespace vaudit::oracle

#endif  // VAUDIT_TESTS_ORACLES_H_
