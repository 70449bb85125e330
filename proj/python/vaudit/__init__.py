# Copyright 2026 The vaudit Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Group-conditional predictive-risk audits for tabular datasets."""

import json
import os

from ._vaudit import VauditError, __version__
from . import _vaudit

__all__ = [
    "VauditError",
    "__version__",
    "assess",
    "audit",
    "baseline_metrics",
    "estimate",
    "spearman",
    "synth",
    "write_synth",
]


def _run(command, data, schema, options):
    opts = {"data": os.fspath(data), "schema": os.fspath(schema)}
    for key, value in options.items():
        opts[key] = os.fspath(value) if isinstance(value, os.PathLike) else value
    text, exit_code = _vaudit.run(command, json.dumps(opts))
    report = json.loads(text)
    return report, exit_code


def assess(data, schema, **options):
    """Baseline metrics report. Returns (report, exit_code)."""
    return _run("assess", data, schema, options)


def estimate(data, schema, **options):
    """V-entropy and DR estimates per family. Returns (report, exit_code).

    Keyword options mirror the CLI flags: families, depths, hidden_width,
    epochs, learning_rate, fallback_learning_rate, batch_size, seed,
    infimum_depth, debug_uniform, pve_out, predictor_dir.
    """
    return _run("estimate", data, schema, options)


def audit(data, schema, **options):
    """Full audit. Also accepts ur, ur_slice, ur_family, top_k, ur_out and
    disparity_out. Returns (report, exit_code)."""
    return _run("audit", data, schema, options)


def synth(**config):
    """Synthetic dataset as (csv_text, schema_dict)."""
    csv_text, schema_text = _vaudit.synth(json.dumps(config))
    return csv_text, json.loads(schema_text)


def write_synth(csv_path, schema_path, **config):
    csv_text, schema = synth(**config)
    with open(csv_path, "w", newline="") as f:
        f.write(csv_text)
    with open(schema_path, "w") as f:
        json.dump(schema, f, indent=2)


def baseline_metrics(s, y):
    """cim, dpl, r_phi and kl for 0/1 sequences s (1 = disadvantaged) and y."""
    return json.loads(_vaudit.baseline_metrics(list(s), list(y)))


def spearman(a, b):
    return _vaudit.spearman(list(a), list(b))
