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

import json
import math
import os
import pathlib
import subprocess

import pytest

import vaudit

SCHEMA_DIR = pathlib.Path(
    os.environ.get("VAUDIT_SCHEMA_DIR",
                   pathlib.Path(__file__).resolve().parents[2] / "schema"))

FAST = dict(hidden_width=8, learning_rate=0.01, families=["linear", "relu", "sigmoid"],
            depths=[1, 2])


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    csv, schema = d / "data.csv", d / "schema.json"
    vaudit.write_synth(csv, schema, n=1500, d=4, eps_d=0.25, seed=3)
    return csv, schema


def validator():
    jsonschema = pytest.importorskip("jsonschema")
    with open(SCHEMA_DIR / "report.schema.json") as f:
        return jsonschema.Draft202012Validator(json.load(f))


def test_version():
    assert vaudit.__version__ == "0.1.0"


def test_baseline_metrics_match_hand_values():
    # 3 advantaged (2 positive), 2 disadvantaged (1 positive).
    m = vaudit.baseline_metrics([0, 0, 0, 1, 1], [1, 1, 0, 1, 0])
    assert m["cim"] == pytest.approx(0.2)
    assert m["dpl"] == pytest.approx(2 / 3 - 1 / 2)
    n11, n10, n01, n00 = 1, 1, 2, 1
    phi = (n11 * n00 - n10 * n01) / math.sqrt(2 * 3 * 3 * 2)
    assert m["r_phi"] == pytest.approx(phi)
    kl = 2 / 3 * math.log2(4 / 3) + 1 / 3 * math.log2(2 / 3)
    assert m["kl"] == pytest.approx(kl)


def test_infinite_divergence_is_an_error():
    with pytest.raises(vaudit.VauditError) as info:
        vaudit.baseline_metrics([0, 0, 1, 1], [1, 0, 0, 0])
    assert info.value.code == "InfiniteDivergence"


def test_spearman():
    assert vaudit.spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert vaudit.spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)


def test_synth_is_deterministic():
    a, schema = vaudit.synth(n=200, d=3, seed=5)
    b, _ = vaudit.synth(n=200, d=3, seed=5)
    assert a == b
    assert a.splitlines()[0] == "x0,x1,x2,group,label"
    assert [c["role"] for c in schema["columns"]][-2:] == ["sensitive", "target"]


def test_assess_report(dataset):
    report, code = vaudit.assess(*dataset)
    assert code == 0
    assert report["command"] == "assess"
    assert report["dataset"]["rows"] == 1500
    validator().validate(report)


def test_audit_report_validates_and_repeats(dataset):
    a, code = vaudit.audit(*dataset, ur=True, **FAST)
    b, _ = vaudit.audit(*dataset, ur=True, **FAST)
    assert code == 0
    assert a == b
    validator().validate(a)
    assert len(a["families"]) == 3
    assert {v["notion"] for v in a["rule_verdicts"]} == {"independence", "separation"}
    for fam in a["families"]:
        sep = fam["dr"]["separation"]
        assert sep["dr"] == pytest.approx(
            sep["mean_pve_advantaged"] - sep["mean_pve_disadvantaged"])
    assert len(a["ur"]["features"]) == 4


def test_estimate_debug_uniform(dataset):
    report, code = vaudit.estimate(*dataset, debug_uniform=True, families=["relu"])
    assert code == 0
    fam = report["families"][0]
    assert fam["v_entropy_bits"] == pytest.approx(1.0)
    assert fam["dr"]["independence"]["dr"] == pytest.approx(0.0)
    validator().validate(report)


def test_errors_carry_codes(dataset, tmp_path):
    with pytest.raises(vaudit.VauditError) as info:
        vaudit.estimate(*dataset, depths=[1], infimum_depth=3)
    assert info.value.code == "InvalidDepth"
    assert info.value.exit_code == 2
    with pytest.raises(vaudit.VauditError):
        vaudit.assess(tmp_path / "missing.csv", dataset[1])
    with pytest.raises(vaudit.VauditError):
        vaudit.audit(*dataset, no_such_option=1)


def test_cli_report_matches_binding(dataset, tmp_path):
    cli = os.environ.get("VAUDIT_CLI")
    if not cli:
        pytest.skip("VAUDIT_CLI not set")
    out = tmp_path / "report.json"
    subprocess.run([cli, "assess", "--data", str(dataset[0]), "--schema",
                    str(dataset[1]), "-o", str(out)], check=True)
    report, _ = vaudit.assess(*dataset)
    assert json.loads(out.read_text()) == report
    validator().validate(report)
