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

// Predictive families of feedforward networks and their trained members.
//
// A family fixes the hidden activation; members differ by depth. Depth 0 is
// a single affine map to two logits (logistic regression). Every evaluation
// path runs one row at a time with a fixed summation order, so batched and
// row-by-row evaluation agree bit for bit.

#ifndef VAUDIT_FAMILY_H_
#define VAUDIT_FAMILY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vaudit/dataset.h"

namespace vaudit {

enum class Activation { kLinear, kRelu, kLeakyRelu, kSigmoid, kGelu };

inline constexpr std::array<Activation, 5> kAllActivations = {
    Activation::kLinear, Activation::kRelu, Activation::kLeakyRelu,
    Activation::kSigmoid, Activation::kGelu};

inline constexpr double kLeakyReluSlope = 0.01;

// Lower bound applied to h[x](y) before any logarithm. Caps a pointwise
// entropy at -log2(1e-12) ~= 39.86 bits.
inline constexpr double kProbabilityFloor = 1e-12;

std::string_view ActivationName(Activation activation);

// Throws Error(kInvalidArgument) listing the valid names.
Activation ParseActivation(std::string_view name);

// Activation value and derivative at a pre-activation z.
double Activate(Activation activation, double z);
double ActivateDerivative(Activation activation, double z);

struct FamilySpec {
  std::string name;
  Activation activation = Activation::kLinear;
  std::vector<int> depth_grid = {1, 2, 3};
  std::size_t hidden_width = 64;
  std::size_t input_dim = 0;
  std::size_t output_classes = 2;

  // Named "V_<activation>".
  static FamilySpec ForActivation(Activation activation, std::size_t input_dim,
                                  std::vector<int> depth_grid = {1, 2, 3},
                                  std::size_t hidden_width = 64);

  void Validate() const;
  bool HasDepth(int depth) const;
  nlohmann::json ToJson() const;
};

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  // Weights are row-major out x in, followed by `out` biases.
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;

  bool operator==(const LayerShape&) const = default;
};

class Predictor {
 public:
  Predictor() = default;

  // `widths` runs from the input dimension to the output classes. All
  // parameters start at zero.
  Predictor(std::string family, Activation activation,
            std::vector<std::size_t> widths);

  const std::string& family() const { return family_; }
  Activation activation() const { return activation_; }
  std::span<const std::size_t> widths() const { return widths_; }
  std::span<const LayerShape> layers() const { return layers_; }
  std::size_t input_dim() const { return widths_.front(); }
  std::size_t depth() const { return layers_.size() - 1; }
  std::size_t parameter_count() const { return parameters_.size(); }

  std::span<const double> parameters() const { return parameters_; }
  std::span<double> mutable_parameters() { return parameters_; }

  nlohmann::json ToJson() const;
  static Predictor FromJson(const nlohmann::json& j);

  bool operator==(const Predictor&) const = default;

 private:
  std::string family_;
  Activation activation_ = Activation::kLinear;
  std::vector<std::size_t> widths_;
  std::vector<LayerShape> layers_;
  std::vector<double> parameters_;
};

// Weights ~ U[-1/sqrt(fan_in), +1/sqrt(fan_in)], biases 0.
Predictor InitPredictor(const FamilySpec& spec, int depth, std::uint64_t seed);

// All-zero parameters: outputs (0.5, 0.5) everywhere.
Predictor ZeroPredictor(const FamilySpec& spec, int depth);

using Probabilities = std::array<double, 2>;

// Reusable scratch space for repeated evaluation of one predictor.
class Evaluator {
 public:
  explicit Evaluator(const Predictor& predictor);

  Probabilities Proba(std::span<const double> x);

  const Predictor& predictor() const { return *predictor_; }

 private:
  friend struct Backprop;

  // Fills pre_ and post_ for every layer; returns softmax probabilities.
  Probabilities Forward(std::span<const double> x);

  const Predictor* predictor_;
  std::vector<std::vector<double>> pre_;
  std::vector<std::vector<double>> post_;
};

Probabilities ForwardProba(const Predictor& predictor,
                           std::span<const double> x);

struct LossAndGradient {
  double loss = 0.0;  // mean negative log-likelihood, nats
  std::vector<double> gradient;
};

// Mean clamped NLL over x.row(rows[k]) with label labels[k], and its gradient
// by backpropagation. Rows whose true-class probability sits below the floor
// contribute zero gradient (the clamped loss is flat there).
LossAndGradient ComputeLossAndGradient(const Predictor& predictor,
                                       const Matrix& x,
                                       std::span<const std::size_t> rows,
                                       std::span<const std::uint8_t> labels);

// Same computation, accumulating into caller-owned storage. `gradient` is
// resized and overwritten. Returns the mean loss.
double AccumulateLossAndGradient(Evaluator& evaluator, const Matrix& x,
                                 std::span<const std::size_t> rows,
                                 std::span<const std::uint8_t> labels,
                                 std::vector<double>& gradient);

}  // namespace vaudit

#endif  // VAUDIT_FAMILY_H_
