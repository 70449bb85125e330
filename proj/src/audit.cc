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

#include "vaudit/audit.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "csv.h"
#include "vaudit/baseline_metrics.h"
#include "vaudit/disparity.h"
#include "vaudit/error.h"
#include "vaudit/family.h"
#include "vaudit/rng.h"
#include "vaudit/trainer.h"
#include "vaudit/ur.h"
#include "vaudit/ventropy.h"

namespace vaudit {
namespace {

using nlohmann::json;

constexpr std::uint64_t kSplitTag = 0x5011;
constexpr std::uint64_t kInfimumTag = 0x1f1;
constexpr std::uint64_t kDownstreamTag = 0xd5;

std::string Hex64(std::uint64_t v) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(v));
  return buffer;
}

std::uint64_t HashText(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string_view GroupName(GroupFilter g) {
  switch (g) {
    case GroupFilter::kAdvantaged: return "advantaged";
    case GroupFilter::kDisadvantaged: return "disadvantaged";
    case GroupFilter::kAll: return "all";
  }
  return "all";
}

json ErrorJson(const std::string& stage, const std::string& family,
               const Error& e) {
  return {{"stage", stage},
          {"family", family},
          {"code", ErrorCodeName(e.code())},
          {"message", e.what()}};
}

struct Prepared {
  TabularDataset raw;
  Partition partition;
};

Prepared Prepare(const AuditOptions& options) {
  const SchemaSpec schema = SchemaSpec::FromFile(options.schema_path);
  Prepared p;
  p.raw = LoadCsv(options.data_path, schema);
  p.partition = PartitionDataset(p.raw, DeriveSeed(options.seed, {kSplitTag}));
  return p;
}

// Activation names resolved and ordered by family name.
std::vector<Activation> ResolveFamilies(const AuditOptions& options) {
  std::vector<Activation> out;
  for (const std::string& name : options.families) {
    out.push_back(ParseActivation(name));
  }
  std::sort(out.begin(), out.end(), [](Activation a, Activation b) {
    return ActivationName(a) < ActivationName(b);
  });
  return out;
}

TrainConfig MakeTrainConfig(const AuditOptions& options) {
  TrainConfig c;
  c.epochs = options.epochs;
  c.learning_rate = options.learning_rate;
  c.fallback_learning_rate = options.FallbackLearningRate();
  c.batch_size = options.batch_size;
  return c;
}

int InfimumDepth(const AuditOptions& options) {
  return options.infimum_depth.value_or(
      *std::max_element(options.depths.begin(), options.depths.end()));
}

json DatasetJson(const Prepared& p) {
  const SplitAssignment& split = p.partition.split;
  return {{"rows", p.raw.size()},
          {"encoded_columns", p.raw.encoded_dim()},
          {"features", p.raw.feature_groups.size()},
          {"content_hash", Hex64(p.raw.ContentHash())},
          {"split",
           {{"train", split.train.size()},
            {"validation", split.validation.size()},
            {"held_out", split.held_out.size()}}}};
}

json BaseReport(const std::string& command, const AuditOptions& options) {
  return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"command", command},
          {"seed", options.seed},
          {"config", options.ToJson()}};
}

CommandResult Finish(json report, int exit_code) {
  report.erase("content_hash");
  report["content_hash"] = Hex64(HashText(report.dump()));
  return {std::move(report), exit_code};
}

// Infimum training and V-entropy/DR estimates for one family.
struct FamilyEstimate {
  FamilySpec spec;
  std::optional<Predictor> predictor;
  std::optional<TrainTrace> trace;
  std::optional<PveTable> table;
  FamilyDr dr;
  json entry;
  bool diverged = false;
};

FamilyEstimate EstimateFamily(const AuditOptions& options, Activation activation,
                              const Partition& part, json& errors) {
  FamilyEstimate est;
  est.spec = FamilySpec::ForActivation(activation, part.data.encoded_dim(),
                                       options.depths, options.hidden_width);
  est.dr.family = est.spec.name;
  const int depth = InfimumDepth(options);
  est.entry = {{"family", est.spec.name},
               {"activation", ActivationName(activation)},
               {"infimum_depth", depth},
               {"spec", est.spec.ToJson()}};
  try {
    if (options.debug_uniform) {
      est.predictor = ZeroPredictor(est.spec, depth);
      est.entry["train_trace"] = nullptr;
    } else {
      TrainConfig config = MakeTrainConfig(options);
      config.seed = DeriveSeed(options.seed,
                               {kInfimumTag, static_cast<std::uint64_t>(activation)});
      TrainResult trained =
          TrainInfimum(est.spec, depth, part.data, part.split, config);
      est.entry["train_trace"] = trained.trace.ToJson();
      est.predictor = std::move(trained.predictor);
      est.trace = std::move(trained.trace);
    }
  } catch (const Error& e) {
    errors.push_back(ErrorJson("estimate", est.spec.name, e));
    est.entry["error"] = ErrorJson("estimate", est.spec.name, e);
    est.diverged = true;
    return est;
  }

  est.table = BuildPveTable(*est.predictor, part.data, part.split.held_out);
  est.entry["v_entropy_bits"] = EstimateVEntropy(*est.table);
  json dr = json::object();
  for (const FairnessNotion notion :
       {FairnessNotion::kIndependence, FairnessNotion::kSeparation}) {
    const std::string key(NotionName(notion));
    try {
      DrEstimate d = ComputeDr(*est.table, notion);
      dr[key] = d.ToJson();
      (notion == FairnessNotion::kIndependence ? est.dr.independence
                                               : est.dr.separation) = d;
    } catch (const Error& e) {
      dr[key] = {{"error", ErrorJson("dr", est.spec.name, e)}};
    }
  }
  est.entry["dr"] = dr;
  return est;
}

void WriteSideOutputs(const AuditOptions& options,
                      const std::vector<FamilyEstimate>& estimates) {
  if (options.predictor_dir) {
    std::filesystem::create_directories(*options.predictor_dir);
  }
  for (const auto& est : estimates) {
    if (options.pve_out && est.table) {
      est.table->WriteCsv(
          PerFamilyPath(*options.pve_out, est.spec.name, estimates.size()));
    }
    if (options.predictor_dir && est.predictor) {
      csv::WriteFile(*options.predictor_dir / (est.spec.name + ".json"),
                     est.predictor->ToJson().dump() + "\n");
    }
  }
}

}  // namespace

void AuditOptions::Validate() const {
  if (families.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no families requested");
  }
  std::set<Activation> seen;
  for (const std::string& name : families) {
    if (!seen.insert(ParseActivation(name)).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "family '" + name + "' requested twice");
    }
  }
  if (depths.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty depth grid");
  }
  for (const int d : depths) {
    if (d < 0) throw Error(ErrorCode::kInvalidArgument, "negative depth");
  }
  if (infimum_depth &&
      std::find(depths.begin(), depths.end(), *infimum_depth) == depths.end()) {
    throw Error(ErrorCode::kInvalidDepth, "infimum depth not in --depths");
  }
  if (hidden_width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "hidden width must be >= 1");
  }
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top-k must be >= 1");
  if (ur_slice && *ur_slice == GroupFilter::kAll) {
    throw Error(ErrorCode::kInvalidArgument,
                "UR slice must be advantaged or disadvantaged");
  }
  if (ur_family) ParseActivation(*ur_family);
  TrainConfig config;
  config.epochs = epochs;
  config.learning_rate = learning_rate;
  config.fallback_learning_rate = FallbackLearningRate();
  config.batch_size = batch_size;
  config.Validate();
}

json AuditOptions::ToJson() const {
  json j = {{"data", data_path.string()},
            {"schema", schema_path.string()},
            {"families", families},
            {"depths", depths},
            {"infimum_depth", infimum_depth ? json(*infimum_depth) : json()},
            {"hidden_width", hidden_width},
            {"seed", seed},
            {"epochs", epochs},
            {"learning_rate", learning_rate},
            {"fallback_learning_rate", FallbackLearningRate()},
            {"batch_size", batch_size},
            {"debug_uniform", debug_uniform},
            {"ur", ur},
            {"ur_slice", ur_slice ? json(GroupName(*ur_slice)) : json()},
            {"ur_family", ur_family ? json(*ur_family) : json()},
            {"top_k", top_k}};
  return j;
}

std::filesystem::path PerFamilyPath(const std::filesystem::path& base,
                                    const std::string& family,
                                    std::size_t family_count) {
  if (family_count <= 1) return base;
  std::filesystem::path out = base.parent_path();
  out /= base.stem().string() + "." + family + base.extension().string();
  return out;
}

std::string FormatReport(const json& report) { return report.dump(2) + "\n"; }

int ExitCodeFor(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return IsNumericalFailure(err->code()) ? kExitNumerical : kExitUsage;
  }
  return kExitUsage;
}

CommandResult RunAssess(const AuditOptions& options) {
  const Prepared p = Prepare(options);
  json report = BaseReport("assess", options);
  report["dataset"] = DatasetJson(p);
  report["baseline"] = ComputeBaselineMetrics(p.raw.s, p.raw.y).ToJson();
  report["majority_class"] = ClassLabelName(MajorityClass(p.raw.y));
  return Finish(std::move(report), kExitOk);
}

CommandResult RunEstimate(const AuditOptions& options) {
  options.Validate();
  const std::vector<Activation> activations = ResolveFamilies(options);
  const Prepared p = Prepare(options);
  json report = BaseReport("estimate", options);
  report["dataset"] = DatasetJson(p);
  json errors = json::array();
  std::vector<FamilyEstimate> estimates;
  bool diverged = false;
  for (const Activation a : activations) {
    estimates.push_back(EstimateFamily(options, a, p.partition, errors));
    diverged |= estimates.back().diverged;
  }
  WriteSideOutputs(options, estimates);
  json families = json::array();
  for (const auto& e : estimates) families.push_back(e.entry);
  report["families"] = families;
  report["errors"] = errors;
  return Finish(std::move(report), diverged ? kExitNumerical : kExitOk);
}

CommandResult RunAudit(const AuditOptions& options) {
  options.Validate();
  const std::vector<Activation> activations = ResolveFamilies(options);
  const Prepared p = Prepare(options);
  const Partition& part = p.partition;
  json report = BaseReport("audit", options);
  report["dataset"] = DatasetJson(p);
  json errors = json::array();

  const BaselineMetrics baseline = ComputeBaselineMetrics(p.raw.s, p.raw.y);
  const ClassLabel majority = MajorityClass(p.raw.y);
  report["baseline"] = baseline.ToJson();
  report["majority_class"] = ClassLabelName(majority);

  std::vector<FamilyEstimate> estimates;
  for (const Activation a : activations) {
    estimates.push_back(EstimateFamily(options, a, part, errors));
  }
  WriteSideOutputs(options, estimates);

  std::vector<FamilyDr> compared_dr;
  std::vector<DisparityResult> compared_results;
  std::string disparity_csv = kDisparityCsvHeader;
  TrainConfig downstream = MakeTrainConfig(options);
  for (FamilyEstimate& est : estimates) {
    if (est.diverged) continue;
    try {
      downstream.seed = DeriveSeed(
          options.seed,
          {kDownstreamTag, static_cast<std::uint64_t>(est.spec.activation)});
      DisparityResult result =
          SimulateDownstream(est.spec, part.data, part.split, downstream);
      est.entry["disparity"] = result.ToJson();
      disparity_csv += result.CsvRows();
      compared_dr.push_back(est.dr);
      compared_results.push_back(std::move(result));
    } catch (const Error& e) {
      errors.push_back(ErrorJson("downstream", est.spec.name, e));
      est.entry["disparity"] = {{"error", ErrorJson("downstream", est.spec.name, e)}};
    }
  }
  if (options.disparity_out) {
    csv::WriteFile(*options.disparity_out, disparity_csv);
  }

  json verdicts = json::array();
  json riskiest = json::object();
  if (!compared_dr.empty()) {
    for (const RuleVerdict& v :
         EvaluateRules(compared_dr, compared_results, majority)) {
      verdicts.push_back(v.ToJson());
      riskiest[std::string(NotionName(v.notion))] =
          v.riskiest_family.empty() ? json() : json(v.riskiest_family);
    }
  } else {
    errors.push_back({{"stage", "rules"},
                      {"family", ""},
                      {"code", ErrorCodeName(ErrorCode::kEmptyInput)},
                      {"message", "no family completed the downstream stage"}});
  }
  report["rule_verdicts"] = verdicts;
  report["riskiest_family"] = riskiest;

  if (options.ur) {
    std::string target;
    if (options.ur_family) {
      target = "V_" + std::string(ActivationName(ParseActivation(*options.ur_family)));
    } else if (riskiest.contains("separation") && riskiest["separation"].is_string()) {
      target = riskiest["separation"].get<std::string>();
    }
    const auto it = std::find_if(estimates.begin(), estimates.end(),
                                 [&](const FamilyEstimate& e) {
                                   return e.spec.name == target && e.predictor;
                                 });
    if (it == estimates.end()) {
      errors.push_back({{"stage", "ur"},
                        {"family", target},
                        {"code", ErrorCodeName(ErrorCode::kInvalidArgument)},
                        {"message", "no trained predictor for the UR family"}});
    } else {
      const GroupFilter group = options.ur_slice.value_or(
          baseline.dpl > 0.0 ? GroupFilter::kAdvantaged
                             : GroupFilter::kDisadvantaged);
      try {
        const std::vector<std::size_t> rows =
            Slice(part.data, part.split, Part::kHeldOut, group, LabelFilter::kAll);
        const std::vector<MaskSpec> masks = FeatureMasks(part.data);
        UrResult ur =
            RankFeatures(*it->predictor, part.data, rows, masks, options.top_k);
        ur.group = GroupName(group);
        report["ur"] = ur.ToJson();
        if (options.ur_out) ur.WriteCsv(*options.ur_out);
      } catch (const Error& e) {
        errors.push_back(ErrorJson("ur", target, e));
      }
    }
  }

  json families = json::array();
  for (const auto& e : estimates) families.push_back(e.entry);
  report["families"] = families;
  report["errors"] = errors;
  report["partial"] = !errors.empty();
  return Finish(std::move(report), errors.empty() ? kExitOk : kExitNumerical);
}

}  // namespace vaudit
