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

// Approximates the best member of a family by mini-batch cross-entropy
// training with AdamW and a linear learning-rate decay to zero.

#ifndef VAUDIT_TRAINER_H_
#define VAUDIT_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "vaudit/dataset.h"
#include "vaudit/family.h"

namespace vaudit {

struct AdamWParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

struct TrainConfig {
  int epochs = 5;
  double learning_rate = 5e-5;
  std::size_t batch_size = 32;
  double fallback_learning_rate = 5e-6;
  AdamWParams adamw;
  std::uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
};

struct TrainTrace {
  std::vector<double> train_loss;       // nats, running mean over the epoch
  std::vector<double> validation_loss;  // nats
  std::vector<double> learning_rate;    // scheduled rate after each epoch
  bool fallback_triggered = false;
  int selected_epoch = 0;               // 0-based
  double effective_learning_rate = 0.0;
  std::size_t effective_batch_size = 0;

  nlohmann::json ToJson() const;
};

// base_lr * (1 - step / total_steps); requires 0 <= step <= total_steps.
double LinearLr(std::size_t step, std::size_t total_steps, double base_lr);

// Decoupled-weight-decay Adam over a flat parameter vector.
class AdamW {
 public:
  AdamW(std::size_t size, AdamWParams params);

  // One update at learning rate `lr`: decay, moment update, bias-corrected
  // step (PyTorch AdamW order).
  void Step(std::span<double> parameters, std::span<const double> gradient,
            double lr);

  std::size_t steps() const { return t_; }

 private:
  AdamWParams params_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

// Mean clamped negative log-likelihood (nats) over the given rows.
double MeanNll(const Predictor& predictor, const TabularDataset& data,
               std::span<const std::size_t> rows);

// The overfitting rule: the final validation loss exceeds the minimum by
// more than 5% relative, or it rose over each of the last two epochs.
bool DetectOverfit(std::span<const double> validation_loss);

struct TrainResult {
  Predictor predictor;
  TrainTrace trace;
};

// Trains on split.train with per-epoch reshuffling, scores split.validation
// after every epoch and returns the best-validation snapshot. When the run
// overfits it restarts once at the fallback rate with half the batch size.
TrainResult TrainInfimum(const FamilySpec& spec, int depth,
                         const TabularDataset& data,
                         const SplitAssignment& split,
                         const TrainConfig& config);

}  // namespace vaudit

#endif  // VAUDIT_TRAINER_H_
