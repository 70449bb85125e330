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

#include "vaudit/family.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vaudit/error.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

constexpr double kGeluCubic = 0.044715;
const double kSqrtTwoOverPi = std::sqrt(2.0 / std::numbers::pi);

constexpr int kPredictorFormatVersion = 1;

// Four interleaved partial sums, combined pairwise. The order is fixed, so
// results do not depend on the caller.
double Dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

std::vector<std::size_t> Architecture(const FamilySpec& spec, int depth) {
  spec.Validate();
  if (!spec.HasDepth(depth)) {
    throw Error(ErrorCode::kInvalidDepth,
                "depth " + std::to_string(depth) + " not in the grid of " +
                    spec.name);
  }
  std::vector<std::size_t> widths = {spec.input_dim};
  for (int l = 0; l < depth; ++l) widths.push_back(spec.hidden_width);
  widths.push_back(spec.output_classes);
  return widths;
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kGelu: return "gelu";
  }
  return "linear";
}

Activation ParseActivation(std::string_view name) {
  std::string_view key = name;
  if (key.starts_with("V_")) key.remove_prefix(2);
  for (const Activation a : kAllActivations) {
    if (ActivationName(a) == key) return a;
  }
  std::string valid;
  for (const Activation a : kAllActivations) {
    if (!valid.empty()) valid += ", ";
    valid += ActivationName(a);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown family '" + std::string(name) + "' (valid: " + valid +
                  ")");
}

double Activate(Activation activation, double z) {
  switch (activation) {
    case Activation::kLinear:
      return z;
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kLeakyRelu:
      return z > 0.0 ? z : kLeakyReluSlope * z;
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::kGelu:
      return 0.5 * z *
             (1.0 + std::tanh(kSqrtTwoOverPi * (z + kGeluCubic * z * z * z)));
  }
  return z;
}

double ActivateDerivative(Activation activation, double z) {
  switch (activation) {
    case Activation::kLinear:
      return 1.0;
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kLeakyRelu:
      return z > 0.0 ? 1.0 : kLeakyReluSlope;
    case Activation::kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case Activation::kGelu: {
      const double u = kSqrtTwoOverPi * (z + kGeluCubic * z * z * z);
      const double t = std::tanh(u);
      const double du = kSqrtTwoOverPi * (1.0 + 3.0 * kGeluCubic * z * z);
      return 0.5 * (1.0 + t) + 0.5 * z * (1.0 - t * t) * du;
    }
  }
  return 1.0;
}

FamilySpec FamilySpec::ForActivation(Activation activation,
                                     std::size_t input_dim,
                                     std::vector<int> depth_grid,
                                     std::size_t hidden_width) {
  FamilySpec spec;
  spec.name = "V_" + std::string(ActivationName(activation));
  spec.activation = activation;
  spec.depth_grid = std::move(depth_grid);
  spec.hidden_width = hidden_width;
  spec.input_dim = input_dim;
  return spec;
}

void FamilySpec::Validate() const {
  if (depth_grid.empty()) {
    throw Error(ErrorCode::kInvalidConfig, name + ": empty depth grid");
  }
  for (const int d : depth_grid) {
    if (d < 0) {
      throw Error(ErrorCode::kInvalidConfig, name + ": negative depth");
    }
  }
  if (hidden_width < 1 || input_dim < 1) {
    throw Error(ErrorCode::kInvalidConfig, name + ": widths must be >= 1");
  }
  if (output_classes != 2) {
    throw Error(ErrorCode::kInvalidConfig, name + ": only binary targets");
  }
}

bool FamilySpec::HasDepth(int depth) const {
  return std::find(depth_grid.begin(), depth_grid.end(), depth) !=
         depth_grid.end();
}

nlohmann::json FamilySpec::ToJson() const {
  return {{"name", name},
          {"activation", ActivationName(activation)},
          {"depth_grid", depth_grid},
          {"hidden_width", hidden_width},
          {"input_dim", input_dim},
          {"output_classes", output_classes}};
}

Predictor::Predictor(std::string family, Activation activation,
                     std::vector<std::size_t> widths)
    : family_(std::move(family)),
      activation_(activation),
      widths_(std::move(widths)) {
  if (widths_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "a predictor needs input and output widths");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    LayerShape shape;
    shape.in = widths_[l];
    shape.out = widths_[l + 1];
    if (shape.in == 0 || shape.out == 0) {
      throw Error(ErrorCode::kInvalidArgument, "layer widths must be >= 1");
    }
    shape.weight_offset = offset;
    shape.bias_offset = offset + shape.in * shape.out;
    offset = shape.bias_offset + shape.out;
    layers_.push_back(shape);
  }
  parameters_.assign(offset, 0.0);
}

nlohmann::json Predictor::ToJson() const {
  return {{"format", "vaudit.predictor"},
          {"version", kPredictorFormatVersion},
          {"family", family_},
          {"activation", ActivationName(activation_)},
          {"widths", widths_},
          {"parameters", parameters_}};
}

Predictor Predictor::FromJson(const nlohmann::json& j) {
  try {
    if (j.at("format") != "vaudit.predictor" ||
        j.at("version") != kPredictorFormatVersion) {
      throw Error(ErrorCode::kParseError, "unsupported predictor format");
    }
    Predictor p(j.at("family").get<std::string>(),
                ParseActivation(j.at("activation").get<std::string>()),
                j.at("widths").get<std::vector<std::size_t>>());
    const auto params = j.at("parameters").get<std::vector<double>>();
    if (params.size() != p.parameters_.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "parameter count does not match architecture");
    }
    for (const double v : params) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue, "non-finite parameter");
      }
    }
    p.parameters_ = params;
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("malformed predictor: ") + e.what());
  }
}

Predictor InitPredictor(const FamilySpec& spec, int depth, std::uint64_t seed) {
  Predictor p(spec.name, spec.activation, Architecture(spec, depth));
  Rng rng(seed);
  std::span<double> params = p.mutable_parameters();
  for (const LayerShape& layer : p.layers()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (std::size_t k = 0; k < layer.in * layer.out; ++k) {
      params[layer.weight_offset + k] = rng.Uniform(-bound, bound);
    }
  }
  return p;
}

Predictor ZeroPredictor(const FamilySpec& spec, int depth) {
  return Predictor(spec.name, spec.activation, Architecture(spec, depth));
}

Evaluator::Evaluator(const Predictor& predictor) : predictor_(&predictor) {
  for (const LayerShape& layer : predictor.layers()) {
    pre_.emplace_back(layer.out, 0.0);
    post_.emplace_back(layer.out, 0.0);
  }
}

Probabilities Evaluator::Forward(std::span<const double> x) {
  const Predictor& p = *predictor_;
  if (x.size() != p.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.size()) +
                    " columns, predictor expects " +
                    std::to_string(p.input_dim()));
  }
  const std::span<const double> params = p.parameters();
  const std::size_t last = p.layers().size() - 1;
  const double* input = x.data();
  for (std::size_t l = 0; l <= last; ++l) {
    const LayerShape& layer = p.layers()[l];
    const double* w = params.data() + layer.weight_offset;
    const double* b = params.data() + layer.bias_offset;
    std::vector<double>& z = pre_[l];
    std::vector<double>& a = post_[l];
    for (std::size_t j = 0; j < layer.out; ++j) {
      z[j] = b[j] + Dot(w + j * layer.in, input, layer.in);
      if (!std::isfinite(z[j])) {
        throw Error(ErrorCode::kNonFiniteActivation,
                    "non-finite pre-activation in layer " + std::to_string(l));
      }
      a[j] = l == last ? z[j] : Activate(p.activation(), z[j]);
    }
    input = a.data();
  }
  const std::vector<double>& logits = post_[last];
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  const double total = e0 + e1;
  return {e0 / total, e1 / total};
}

Probabilities Evaluator::Proba(std::span<const double> x) { return Forward(x); }

Probabilities ForwardProba(const Predictor& predictor,
                           std::span<const double> x) {
  Evaluator evaluator(predictor);
  return evaluator.Proba(x);
}

struct Backprop {
  static double Run(Evaluator& ev, const Matrix& x,
                    std::span<const std::size_t> rows,
                    std::span<const std::uint8_t> labels,
                    std::vector<double>& gradient) {
    const Predictor& p = *ev.predictor_;
    if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
    if (rows.size() != labels.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "batch rows and labels differ in length");
    }
    gradient.assign(p.parameter_count(), 0.0);
    const std::span<const double> params = p.parameters();
    const std::size_t n_layers = p.layers().size();
    std::vector<std::vector<double>> delta(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
      delta[l].assign(p.layers()[l].out, 0.0);
    }

    double loss_sum = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::span<const double> input = x.row(rows[k]);
      const Probabilities prob = ev.Forward(input);
      const std::uint8_t label = labels[k];
      const double p_true = std::max(prob[label], kProbabilityFloor);
      loss_sum += -std::log(p_true);
      if (prob[label] < kProbabilityFloor) continue;

      delta[n_layers - 1][0] = prob[0] - (label == 0 ? 1.0 : 0.0);
      delta[n_layers - 1][1] = prob[1] - (label == 1 ? 1.0 : 0.0);
      for (std::size_t l = n_layers; l-- > 0;) {
        const LayerShape& layer = p.layers()[l];
        const double* a_prev = l == 0 ? input.data() : ev.post_[l - 1].data();
        double* gw = gradient.data() + layer.weight_offset;
        double* gb = gradient.data() + layer.bias_offset;
        const std::vector<double>& d = delta[l];
        for (std::size_t j = 0; j < layer.out; ++j) {
          const double dj = d[j];
          gb[j] += dj;
          double* gw_row = gw + j * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) gw_row[i] += dj * a_prev[i];
        }
        if (l == 0) break;
        // delta_{l-1} = (W_l^T delta_l) * act'(z_{l-1}), rows accumulated in
        // ascending output order.
        const double* w = params.data() + layer.weight_offset;
        std::vector<double>& back = delta[l - 1];
        std::fill(back.begin(), back.end(), 0.0);
        for (std::size_t j = 0; j < layer.out; ++j) {
          const double dj = d[j];
          const double* w_row = w + j * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) back[i] += dj * w_row[i];
        }
        const std::vector<double>& z_prev = ev.pre_[l - 1];
        for (std::size_t i = 0; i < back.size(); ++i) {
          back[i] *= ActivateDerivative(p.activation(), z_prev[i]);
        }
      }
    }
    const double scale = 1.0 / static_cast<double>(rows.size());
    for (double& g : gradient) g *= scale;
    return loss_sum * scale;
  }
};

double AccumulateLossAndGradient(Evaluator& evaluator, const Matrix& x,
                                 std::span<const std::size_t> rows,
                                 std::span<const std::uint8_t> labels,
                                 std::vector<double>& gradient) {
  return Backprop::Run(evaluator, x, rows, labels, gradient);
}

LossAndGradient ComputeLossAndGradient(const Predictor& predictor,
                                       const Matrix& x,
                                       std::span<const std::size_t> rows,
                                       std::span<const std::uint8_t> labels) {
  Evaluator evaluator(predictor);
  LossAndGradient out;
  out.loss = Backprop::Run(evaluator, x, rows, labels, out.gradient);
  return out;
}

}  // namespace vaudit
