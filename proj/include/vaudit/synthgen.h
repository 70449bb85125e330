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

// Seeded synthetic tabular data with known group-conditional structure.
//
// Per row: S ~ Bernoulli(p_d); the clean label is Bernoulli(q + delta/2) for
// the advantaged group and Bernoulli(q - delta/2) for the disadvantaged one;
// each of the d features is N(+-signal/(2 sqrt(d)), 1) by clean class, so the
// class-conditional Mahalanobis gap equals `signal`; finally the observed
// label is flipped with the group's noise rate.

#ifndef VAUDIT_SYNTHGEN_H_
#define VAUDIT_SYNTHGEN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "vaudit/dataset.h"

namespace vaudit {

struct SynthConfig {
  std::size_t n = 10000;
  std::size_t d = 8;
  double p_d = 0.5;
  double q = 0.5;
  double delta = 0.0;
  double eps_a = 0.0;
  double eps_d = 0.0;
  double signal = 2.0;
  // Per-group overrides of `signal`.
  std::optional<double> signal_a;
  std::optional<double> signal_d;
  std::uint64_t seed = 0;

  double positive_rate(int s) const { return s == 0 ? q + delta / 2 : q - delta / 2; }
  double noise(int s) const { return s == 0 ? eps_a : eps_d; }
  double signal_for(int s) const {
    return s == 0 ? signal_a.value_or(signal) : signal_d.value_or(signal);
  }

  // Throws Error(kInvalidConfig).
  void Validate() const;
  nlohmann::json ToJson() const;
};

TabularDataset Generate(const SynthConfig& config);

// Columns x0..x{d-1}, group (advantaged|disadvantaged), label (1|0). Loading
// the CSV with SynthSchema reproduces Generate() bit for bit.
std::string SynthCsv(const TabularDataset& data);
SchemaSpec SynthSchema(std::size_t d);

void WriteSynth(const SynthConfig& config, const std::filesystem::path& csv_path,
                const std::filesystem::path& schema_path);

}  // namespace vaudit

#endif  // VAUDIT_SYNTHGEN_H_
