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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vaudit/audit.h"
#include "vaudit/error.h"
#include "vaudit/synthgen.h"

namespace {

using vaudit::AuditOptions;

struct CliState {
  AuditOptions options;
  std::string output;
  std::string pve_out;
  std::string ur_out;
  std::string disparity_out;
  std::string predictor_dir;
  std::string ur_slice;
  std::string ur_family;
  int infimum_depth = -1;
  double fallback_lr = -1.0;
};

std::vector<std::string> SplitList(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!piece.empty()) out.push_back(piece);
    }
  }
  return out;
}

void AddCommon(CLI::App* cmd, CliState& st, std::vector<std::string>& families,
               std::vector<std::string>& depths) {
  cmd->add_option("--data", st.options.data_path, "Input CSV")->required();
  cmd->add_option("--schema", st.options.schema_path, "Schema JSON")->required();
  cmd->add_option("--seed", st.options.seed, "Base seed");
  cmd->add_option("--output,-o", st.output, "Report path (default stdout)");
  cmd->add_option("--families", families,
                  "Comma-separated activations (linear,relu,leaky_relu,sigmoid,gelu)");
  cmd->add_option("--depths", depths, "Comma-separated hidden-layer counts");
  cmd->add_option("--width", st.options.hidden_width, "Hidden width");
  cmd->add_option("--epochs", st.options.epochs, "Training epochs");
  cmd->add_option("--lr", st.options.learning_rate, "Base learning rate");
  cmd->add_option("--fallback-lr", st.fallback_lr,
                  "Learning rate after an overfitting restart (default: lr/10)");
  cmd->add_option("--batch-size", st.options.batch_size, "Mini-batch size");
  cmd->add_option("--infimum-depth", st.infimum_depth,
                  "Depth trained as the family infimum (default: deepest)");
  cmd->add_option("--pve-out", st.pve_out, "Per-instance PVE CSV");
  cmd->add_option("--save-predictors", st.predictor_dir,
                  "Directory for the trained infimum predictors (JSON)");
  cmd->add_flag("--debug-uniform", st.options.debug_uniform,
                "Score an untrained uniform predictor");
}

void Finalize(CliState& st, const std::vector<std::string>& families,
              const std::vector<std::string>& depths) {
  if (!families.empty()) st.options.families = SplitList(families);
  if (!depths.empty()) {
    st.options.depths.clear();
    for (const std::string& d : SplitList(depths)) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(d, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != d.size()) {
        throw vaudit::Error(vaudit::ErrorCode::kInvalidArgument,
                            "bad depth '" + d + "'");
      }
      st.options.depths.push_back(value);
    }
  }
  if (st.fallback_lr >= 0.0) st.options.fallback_learning_rate = st.fallback_lr;
  if (st.infimum_depth >= 0) st.options.infimum_depth = st.infimum_depth;
  if (!st.pve_out.empty()) st.options.pve_out = st.pve_out;
  if (!st.ur_out.empty()) st.options.ur_out = st.ur_out;
  if (!st.disparity_out.empty()) st.options.disparity_out = st.disparity_out;
  if (!st.predictor_dir.empty()) st.options.predictor_dir = st.predictor_dir;
  if (!st.ur_family.empty()) st.options.ur_family = st.ur_family;
  if (!st.ur_slice.empty()) {
    if (st.ur_slice == "advantaged") {
      st.options.ur_slice = vaudit::GroupFilter::kAdvantaged;
    } else if (st.ur_slice == "disadvantaged") {
      st.options.ur_slice = vaudit::GroupFilter::kDisadvantaged;
    } else {
      throw vaudit::Error(vaudit::ErrorCode::kInvalidArgument,
                          "--ur-slice must be advantaged or disadvantaged");
    }
  }
}

int Emit(const vaudit::CommandResult& result, const std::string& output) {
  const std::string text = vaudit::FormatReport(result.report);
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return vaudit::kExitUsage;
    }
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit tabular datasets for group-conditional predictive risk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vaudit::kToolVersion);

  CliState st;
  std::vector<std::string> families;
  std::vector<std::string> depths;

  CLI::App* assess = app.add_subcommand("assess", "Dataset baseline metrics");
  assess->add_option("--data", st.options.data_path, "Input CSV")->required();
  assess->add_option("--schema", st.options.schema_path, "Schema JSON")->required();
  assess->add_option("--seed", st.options.seed, "Base seed");
  assess->add_option("--output,-o", st.output, "Report path (default stdout)");

  CLI::App* estimate =
      app.add_subcommand("estimate", "V-entropy and disparity-risk estimates");
  AddCommon(estimate, st, families, depths);

  CLI::App* audit = app.add_subcommand(
      "audit", "Estimates, downstream disparities, rule verdicts, and UR");
  AddCommon(audit, st, families, depths);
  audit->add_option("--disparity-out", st.disparity_out, "Per-depth disparity CSV");
  audit->add_flag("--ur", st.options.ur, "Rank features by uncertainty reduction");
  audit->add_option("--ur-slice", st.ur_slice, "advantaged or disadvantaged");
  audit->add_option("--ur-family", st.ur_family, "Family used for UR");
  audit->add_option("--top-k", st.options.top_k, "Number of UR features kept");
  audit->add_option("--ur-out", st.ur_out, "UR CSV");

  vaudit::SynthConfig synth_config;
  std::string synth_out;
  std::string schema_out;
  double signal_a = -1.0;
  double signal_d = -1.0;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--n", synth_config.n, "Rows");
  synth->add_option("--d", synth_config.d, "Features");
  synth->add_option("--p-d", synth_config.p_d, "Disadvantaged share");
  synth->add_option("--q", synth_config.q, "Mean positive rate");
  synth->add_option("--delta", synth_config.delta, "Positive-rate gap");
  synth->add_option("--eps-a", synth_config.eps_a, "Advantaged label noise");
  synth->add_option("--eps-d", synth_config.eps_d, "Disadvantaged label noise");
  synth->add_option("--signal", synth_config.signal, "Class separation");
  synth->add_option("--signal-a", signal_a, "Advantaged class separation");
  synth->add_option("--signal-d", signal_d, "Disadvantaged class separation");
  synth->add_option("--seed", synth_config.seed, "Seed");
  synth->add_option("--out", synth_out, "CSV path")->required();
  synth->add_option("--schema-out", schema_out, "Schema JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vaudit::kExitUsage;
  }

  try {
    if (synth->parsed()) {
      if (signal_a >= 0.0) synth_config.signal_a = signal_a;
      if (signal_d >= 0.0) synth_config.signal_d = signal_d;
      vaudit::WriteSynth(synth_config, synth_out, schema_out);
      return vaudit::kExitOk;
    }
    Finalize(st, families, depths);
    if (assess->parsed()) return Emit(vaudit::RunAssess(st.options), st.output);
    if (estimate->parsed()) return Emit(vaudit::RunEstimate(st.options), st.output);
    return Emit(vaudit::RunAudit(st.options), st.output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vaudit::ExitCodeFor(e);
  }
}
