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

#include "vaudit/trainer.h"

#include <algorithm>
#include <cmath>

#include "vaudit/error.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kShuffleStream = 0x5eed;
constexpr double kOverfitRelativeGap = 0.05;

struct RunOutcome {
  Predictor best;
  TrainTrace trace;
};

RunOutcome RunOnce(const FamilySpec& spec, int depth,
                   const TabularDataset& data, const SplitAssignment& split,
                   const TrainConfig& config, double base_lr,
                   std::size_t batch_size) {
  Predictor predictor =
      InitPredictor(spec, depth, DeriveSeed(config.seed, {kInitStream}));
  if (predictor.input_dim() != data.encoded_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "family input_dim does not match the dataset");
  }
  const std::size_t n_train = split.train.size();
  const std::size_t steps_per_epoch = (n_train + batch_size - 1) / batch_size;
  const std::size_t total_steps =
      steps_per_epoch * static_cast<std::size_t>(config.epochs);

  AdamW optimizer(predictor.parameter_count(), config.adamw);
  Evaluator evaluator(predictor);
  std::vector<double> gradient;
  std::vector<std::size_t> order = split.train;
  std::vector<std::uint8_t> labels;

  RunOutcome out;
  out.trace.effective_learning_rate = base_lr;
  out.trace.effective_batch_size = batch_size;
  double best_validation = 0.0;
  std::size_t step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Each epoch reshuffles the train rows from their sorted order.
    order = split.train;
    Rng rng(DeriveSeed(config.seed,
                       {kShuffleStream, static_cast<std::uint64_t>(epoch)}));
    rng.Shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_train; start += batch_size) {
      const std::size_t count = std::min(batch_size, n_train - start);
      const std::span<const std::size_t> rows(order.data() + start, count);
      labels.resize(count);
      for (std::size_t k = 0; k < count; ++k) labels[k] = data.y[rows[k]];
      const double loss =
          AccumulateLossAndGradient(evaluator, data.x, rows, labels, gradient);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergedTraining,
                    spec.name + ": non-finite training loss");
      }
      epoch_loss += loss * static_cast<double>(count);
      optimizer.Step(predictor.mutable_parameters(), gradient,
                     LinearLr(step, total_steps, base_lr));
      ++step;
    }
    for (const double v : predictor.parameters()) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kDivergedTraining,
                    spec.name + ": non-finite parameters");
      }
    }
    const double validation = MeanNll(predictor, data, split.validation);
    if (!std::isfinite(validation)) {
      throw Error(ErrorCode::kDivergedTraining,
                  spec.name + ": non-finite validation loss");
    }
    out.trace.train_loss.push_back(epoch_loss / static_cast<double>(n_train));
    out.trace.validation_loss.push_back(validation);
    out.trace.learning_rate.push_back(LinearLr(step, total_steps, base_lr));
    if (epoch == 0 || validation < best_validation) {
      best_validation = validation;
      out.best = predictor;
      out.trace.selected_epoch = epoch;
    }
  }
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) {
    throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  }
  if (!(learning_rate > 0.0) || !(fallback_learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "learning rates must be > 0");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidConfig, "batch size must be >= 1");
  }
  if (!(adamw.beta1 >= 0.0 && adamw.beta1 < 1.0 && adamw.beta2 >= 0.0 &&
        adamw.beta2 < 1.0 && adamw.epsilon > 0.0 && adamw.weight_decay >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "invalid AdamW parameters");
  }
}

nlohmann::json TrainConfig::ToJson() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"fallback_learning_rate", fallback_learning_rate},
          {"adamw",
           {{"beta1", adamw.beta1},
            {"beta2", adamw.beta2},
            {"epsilon", adamw.epsilon},
            {"weight_decay", adamw.weight_decay}}},
          {"scheduler", "linear"},
          {"seed", seed}};
}

nlohmann::json TrainTrace::ToJson() const {
  return {{"train_loss", train_loss},
          {"validation_loss", validation_loss},
          {"learning_rate", learning_rate},
          {"fallback_triggered", fallback_triggered},
          {"selected_epoch", selected_epoch},
          {"effective_learning_rate", effective_learning_rate},
          {"effective_batch_size", effective_batch_size}};
}

double LinearLr(std::size_t step, std::size_t total_steps, double base_lr) {
  if (total_steps == 0 || step > total_steps) {
    throw Error(ErrorCode::kInvalidArgument, "step outside [0, total_steps]");
  }
  return base_lr * (1.0 - static_cast<double>(step) /
                              static_cast<double>(total_steps));
}

AdamW::AdamW(std::size_t size, AdamWParams params)
    : params_(params), m_(size, 0.0), v_(size, 0.0) {}

void AdamW::Step(std::span<double> parameters,
                 std::span<const double> gradient, double lr) {
  if (parameters.size() != m_.size() || gradient.size() != m_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "AdamW state size mismatch");
  }
  ++t_;
  const double t = static_cast<double>(t_);
  const double correction1 = 1.0 - std::pow(params_.beta1, t);
  const double correction2 = 1.0 - std::pow(params_.beta2, t);
  const double decay = 1.0 - lr * params_.weight_decay;
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    const double g = gradient[i];
    parameters[i] *= decay;
    m_[i] = params_.beta1 * m_[i] + (1.0 - params_.beta1) * g;
    v_[i] = params_.beta2 * v_[i] + (1.0 - params_.beta2) * g * g;
    const double m_hat = m_[i] / correction1;
    const double v_hat = v_[i] / correction2;
    parameters[i] -= lr * m_hat / (std::sqrt(v_hat) + params_.epsilon);
  }
}

double MeanNll(const Predictor& predictor, const TabularDataset& data,
               std::span<const std::size_t> rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no rows to score");
  Evaluator evaluator(predictor);
  double sum = 0.0;
  for (const std::size_t r : rows) {
    const Probabilities p = evaluator.Proba(data.x.row(r));
    sum += -std::log(std::max(p[data.y[r]], kProbabilityFloor));
  }
  return sum / static_cast<double>(rows.size());
}

bool DetectOverfit(std::span<const double> validation_loss) {
  if (validation_loss.empty()) return false;
  const double best =
      *std::min_element(validation_loss.begin(), validation_loss.end());
  const double last = validation_loss.back();
  if (last > best * (1.0 + kOverfitRelativeGap)) return true;
  const std::size_t n = validation_loss.size();
  return n >= 3 && validation_loss[n - 1] > validation_loss[n - 2] &&
         validation_loss[n - 2] > validation_loss[n - 3];
}

TrainResult TrainInfimum(const FamilySpec& spec, int depth,
                         const TabularDataset& data,
                         const SplitAssignment& split,
                         const TrainConfig& config) {
  config.Validate();
  spec.Validate();
  if (split.train.size() < 2 * config.batch_size) {
    throw Error(ErrorCode::kInsufficientData,
                "train part has " + std::to_string(split.train.size()) +
                    " rows, need at least 2 x batch size");
  }
  if (split.validation.empty()) {
    throw Error(ErrorCode::kInsufficientData, "validation part is empty");
  }
  RunOutcome run = RunOnce(spec, depth, data, split, config,
                           config.learning_rate, config.batch_size);
  if (DetectOverfit(run.trace.validation_loss)) {
    run = RunOnce(spec, depth, data, split, config,
                  config.fallback_learning_rate,
                  std::max<std::size_t>(1, config.batch_size / 2));
    run.trace.fallback_triggered = true;
  }
  return {std::move(run.best), std::move(run.trace)};
}

}  // namespace vaudit
