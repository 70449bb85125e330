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

// Python bindings. Options and reports cross the boundary as JSON text; the
// package wrapper converts them to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaudit/audit.h"
#include "vaudit/baseline_metrics.h"
#include "vaudit/disparity.h"
#include "vaudit/error.h"
#include "vaudit/synthgen.h"

namespace py = pybind11;
using nlohmann::json;

namespace vaudit {
namespace {

template <typename T>
void Take(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

template <typename T>
void Take(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

AuditOptions OptionsFromJson(const std::string& text) {
  const json j = json::parse(text);
  static const std::vector<std::string> kKnown = {
      "data", "schema", "families", "depths", "infimum_depth", "hidden_width",
      "seed", "epochs", "learning_rate", "fallback_learning_rate", "batch_size",
      "debug_uniform", "ur", "ur_slice", "ur_family", "top_k", "pve_out",
      "ur_out", "disparity_out", "predictor_dir"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown option '" + key + "'");
    }
  }
  AuditOptions o;
  o.data_path = j.at("data").get<std::string>();
  o.schema_path = j.at("schema").get<std::string>();
  Take(j, "families", o.families);
  Take(j, "depths", o.depths);
  Take(j, "infimum_depth", o.infimum_depth);
  Take(j, "hidden_width", o.hidden_width);
  Take(j, "seed", o.seed);
  Take(j, "epochs", o.epochs);
  Take(j, "learning_rate", o.learning_rate);
  Take(j, "fallback_learning_rate", o.fallback_learning_rate);
  Take(j, "batch_size", o.batch_size);
  Take(j, "debug_uniform", o.debug_uniform);
  Take(j, "ur", o.ur);
  Take(j, "ur_family", o.ur_family);
  Take(j, "top_k", o.top_k);
  std::optional<std::string> slice, pve, ur_out, disp, pred;
  Take(j, "ur_slice", slice);
  if (slice) {
    if (*slice == "advantaged") {
      o.ur_slice = GroupFilter::kAdvantaged;
    } else if (*slice == "disadvantaged") {
      o.ur_slice = GroupFilter::kDisadvantaged;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "ur_slice must be advantaged or disadvantaged");
    }
  }
  Take(j, "pve_out", pve);
  Take(j, "ur_out", ur_out);
  Take(j, "disparity_out", disp);
  Take(j, "predictor_dir", pred);
  if (pve) o.pve_out = *pve;
  if (ur_out) o.ur_out = *ur_out;
  if (disp) o.disparity_out = *disp;
  if (pred) o.predictor_dir = *pred;
  return o;
}

py::tuple Run(const std::string& command, const std::string& options_json) {
  const AuditOptions o = OptionsFromJson(options_json);
  CommandResult r;
  {
    py::gil_scoped_release release;
    if (command == "assess") {
      r = RunAssess(o);
    } else if (command == "estimate") {
      r = RunEstimate(o);
    } else if (command == "audit") {
      r = RunAudit(o);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown command '" + command + "'");
    }
  }
  return py::make_tuple(FormatReport(r.report), r.exit_code);
}

SynthConfig SynthFromJson(const std::string& text) {
  const json j = json::parse(text);
  SynthConfig c;
  Take(j, "n", c.n);
  Take(j, "d", c.d);
  Take(j, "p_d", c.p_d);
  Take(j, "q", c.q);
  Take(j, "delta", c.delta);
  Take(j, "eps_a", c.eps_a);
  Take(j, "eps_d", c.eps_d);
  Take(j, "signal", c.signal);
  Take(j, "signal_a", c.signal_a);
  Take(j, "signal_d", c.signal_d);
  Take(j, "seed", c.seed);
  return c;
}

py::tuple Synth(const std::string& config_json) {
  const SynthConfig c = SynthFromJson(config_json);
  const TabularDataset d = Generate(c);
  return py::make_tuple(SynthCsv(d), SynthSchema(c.d).ToJson().dump(2));
}

std::string Baseline(const std::vector<std::uint8_t>& s,
                     const std::vector<std::uint8_t>& y) {
  if (s.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "s and y differ in length");
  }
  return ComputeBaselineMetrics(s, y).ToJson().dump();
}

}  // namespace
}  // namespace vaudit

PYBIND11_MODULE(_vaudit, m) {
  m.doc() = "Native core of the vaudit package";
  m.attr("__version__") = vaudit::kToolVersion;

  static PyObject* error_type =
      py::exception<vaudit::Error>(m, "VauditError").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vaudit::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(vaudit::ErrorCodeName(e.code()));
      exc.attr("exit_code") = vaudit::ExitCodeFor(e);
      PyErr_SetObject(error_type, exc.ptr());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("run", &vaudit::Run, py::arg("command"), py::arg("options_json"),
        "Runs assess/estimate/audit; returns (report_text, exit_code).");
  m.def("synth", &vaudit::Synth, py::arg("config_json"),
        "Generates a synthetic dataset; returns (csv_text, schema_text).");
  m.def("baseline_metrics", &vaudit::Baseline, py::arg("s"), py::arg("y"),
        "Dataset-level metrics of binary S and Y as JSON text.");
  m.def("spearman", [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
      throw vaudit::Error(vaudit::ErrorCode::kInvalidArgument, "length mismatch");
    }
    return vaudit::SpearmanRho(a, b);
  }, py::arg("a"), py::arg("b"));
}
