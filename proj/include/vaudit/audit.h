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

// End-to-end audit workflow behind the command-line tool. Each command
// returns a JSON report (keys sorted) and the process exit code.
//
// Exit codes: 0 success, 2 usage/configuration/data error, 3 numerical
// failure or a pipeline stage that could not complete.

#ifndef VAUDIT_AUDIT_H_
#define VAUDIT_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaudit/dataset.h"

namespace vaudit {

inline constexpr const char* kToolName = "vaudit";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct AuditOptions {
  std::filesystem::path data_path;
  std::filesystem::path schema_path;
  std::vector<std::string> families = {"gelu", "leaky_relu", "linear", "relu",
                                       "sigmoid"};
  std::vector<int> depths = {1, 2, 3};
  // Depth of the model trained as the family's infimum; defaults to the
  // deepest member of the grid.
  std::optional<int> infimum_depth;
  std::size_t hidden_width = 64;
  std::uint64_t seed = 0;
  int epochs = 5;
  double learning_rate = 5e-5;
  // Rate used by the overfitting restart; defaults to learning_rate / 10.
  std::optional<double> fallback_learning_rate;
  std::size_t batch_size = 32;

  double FallbackLearningRate() const {
    return fallback_learning_rate.value_or(learning_rate / 10.0);
  }
  // Skips training and scores an all-zero (uniform) predictor.
  bool debug_uniform = false;

  bool ur = false;
  std::optional<GroupFilter> ur_slice;
  std::optional<std::string> ur_family;
  std::size_t top_k = 15;

  std::optional<std::filesystem::path> pve_out;
  std::optional<std::filesystem::path> ur_out;
  std::optional<std::filesystem::path> disparity_out;
  // Directory receiving each infimum predictor as <family>.json.
  std::optional<std::filesystem::path> predictor_dir;

  // Throws Error(kInvalidArgument / kInvalidConfig / kInvalidDepth).
  void Validate() const;
  nlohmann::json ToJson() const;
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = kExitOk;
};

CommandResult RunAssess(const AuditOptions& options);
CommandResult RunEstimate(const AuditOptions& options);
CommandResult RunAudit(const AuditOptions& options);

// Pretty-printed, newline-terminated report text.
std::string FormatReport(const nlohmann::json& report);

// Exit code for an error escaping a command.
int ExitCodeFor(const std::exception& e);

// Path used for a per-family side output when several families share one
// requested path: "dir/stem.<family><ext>".
std::filesystem::path PerFamilyPath(const std::filesystem::path& base,
                                    const std::string& family,
                                    std::size_t family_count);

}  // namespace vaudit

#endif  // VAUDIT_AUDIT_H_
