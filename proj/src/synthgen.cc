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

#include "vaudit/synthgen.h"

#include <cmath>

#include "csv.h"
#include "vaudit/error.h"
#include "vaudit/rng.h"

namespace vaudit {
namespace {

constexpr const char* kGroupColumn = "group";
constexpr const char* kLabelColumn = "label";

std::string FeatureName(std::size_t j) { return "x" + std::to_string(j); }

}  // namespace

void SynthConfig::Validate() const {
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, why);
  };
  if (n < 100) fail("n must be >= 100");
  if (d < 1) fail("d must be >= 1");
  if (!(p_d > 0.0 && p_d < 1.0)) fail("p_d must lie in (0, 1)");
  for (int s = 0; s < 2; ++s) {
    const double rate = positive_rate(s);
    if (!(rate > 0.0 && rate < 1.0)) {
      fail("group positive rates q +- delta/2 must lie in (0, 1)");
    }
    if (!(noise(s) >= 0.0 && noise(s) < 0.5)) {
      fail("label-noise rates must lie in [0, 0.5)");
    }
    if (!(signal_for(s) >= 0.0) || !std::isfinite(signal_for(s))) {
      fail("signal strength must be finite and >= 0");
    }
  }
}

nlohmann::json SynthConfig::ToJson() const {
  nlohmann::json j = {{"n", n},         {"d", d},         {"p_d", p_d},
                      {"q", q},         {"delta", delta}, {"eps_a", eps_a},
                      {"eps_d", eps_d}, {"signal", signal}, {"seed", seed}};
  j["signal_a"] = signal_a ? nlohmann::json(*signal_a) : nlohmann::json();
  j["signal_d"] = signal_d ? nlohmann::json(*signal_d) : nlohmann::json();
  return j;
}

TabularDataset Generate(const SynthConfig& config) {
  config.Validate();
  TabularDataset data;
  data.source = "synthgen";
  data.x = Matrix(config.n, config.d);
  data.s.assign(config.n, 0);
  data.y.assign(config.n, 0);
  for (std::size_t j = 0; j < config.d; ++j) {
    data.feature_groups.push_back(
        {FeatureName(j), FeatureKind::kNumeric, j, j + 1, {}});
  }

  Rng rng(config.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.d));
  for (std::size_t i = 0; i < config.n; ++i) {
    const int s = rng.Bernoulli(config.p_d) ? 1 : 0;
    const int clean = rng.Bernoulli(config.positive_rate(s)) ? 1 : 0;
    const double shift = (clean - 0.5) * config.signal_for(s) * scale;
    for (std::size_t j = 0; j < config.d; ++j) {
      data.x(i, j) = shift + rng.Normal();
    }
    const bool flip = rng.Bernoulli(config.noise(s));
    data.s[i] = static_cast<std::uint8_t>(s);
    data.y[i] = static_cast<std::uint8_t>(flip ? 1 - clean : clean);
  }
  return data;
}

std::string SynthCsv(const TabularDataset& data) {
  std::string out;
  for (const FeatureGroup& group : data.feature_groups) {
    out += csv::Escape(group.name) + ",";
  }
  out += std::string(kGroupColumn) + "," + kLabelColumn + "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.encoded_dim(); ++j) {
      out += csv::FormatDouble(data.x(i, j));
      out += ',';
    }
    out += data.s[i] == 1 ? "disadvantaged," : "advantaged,";
    out += data.y[i] == 1 ? "1\n" : "0\n";
  }
  return out;
}

SchemaSpec SynthSchema(std::size_t d) {
  SchemaSpec schema;
  for (std::size_t j = 0; j < d; ++j) {
    schema.columns.push_back(
        {FeatureName(j), ColumnRole::kFeature, FeatureKind::kNumeric});
  }
  schema.columns.push_back(
      {kGroupColumn, ColumnRole::kSensitive, FeatureKind::kCategorical});
  schema.columns.push_back(
      {kLabelColumn, ColumnRole::kTarget, FeatureKind::kCategorical});
  schema.disadvantaged_value = "disadvantaged";
  schema.positive_value = "1";
  return schema;
}

void WriteSynth(const SynthConfig& config, const std::filesystem::path& csv_path,
                const std::filesystem::path& schema_path) {
  const TabularDataset data = Generate(config);
  csv::WriteFile(csv_path, SynthCsv(data));
  csv::WriteFile(schema_path, SynthSchema(config.d).ToJson().dump(2) + "\n");
}

}  // namespace vaudit
