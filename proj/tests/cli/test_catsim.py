# Copyright 2026 The catqubit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""End-to-end checks of the catsim command line: manifests, exit codes, naming."""

import csv
import hashlib
import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

CATSIM = os.environ["CATSIM_BIN"]
SCHEMAS = pathlib.Path(os.environ["CATSIM_SCHEMAS"])


def run(*args, out=None):
    cmd = [CATSIM, *args]
    if out is not None:
        cmd += ["--out", str(out)]
    return subprocess.run(cmd, capture_output=True, text=True, timeout=600)


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def error_record(proc):
    rec = json.loads(proc.stderr.strip().splitlines()[-1])
    jsonschema.validate(rec, schema("error.schema.json"))
    return rec["error"]


def test_version():
    proc = run("--version")
    assert proc.returncode == 0
    assert proc.stdout.startswith("catsim ")


def test_kerr_preset_writes_valid_manifest(tmp_path):
    proc = run("kerr", "--preset", "kerr", "--timestamp", "T0", out=tmp_path)
    assert proc.returncode == 0, proc.stderr
    manifest = json.loads((tmp_path / "kerr-T0.manifest.json").read_text())
    jsonschema.validate(manifest, schema("manifest.schema.json"))
    out = manifest["outputs"][0]
    data = (tmp_path / out["path"]).read_bytes()
    assert hashlib.sha256(data).hexdigest() == out["sha256"]
    assert b"\r" not in data
    rows = list(csv.reader(data.decode("utf-8").splitlines()))
    assert rows[0] == out["columns"] == ["q", "t_q", "distance", "phase_insensitive_distance"]
    assert len(rows) - 1 == out["rows"] == 4
    diag = manifest["diagnostics"]
    assert diag["t2_residual"] < 1e-8
    assert diag["t8_residual"] < 1e-8
    assert diag["jump_commutation_residual"] < 1e-10
    # nine significant digits at most
    for value in rows[1][1:]:
        mantissa = value.split("e")[0].replace("-", "").replace(".", "").lstrip("0")
        assert len(mantissa) <= 9


def test_repeated_runs_do_not_overwrite(tmp_path):
    for _ in range(2):
        assert run("kerr", "--preset", "kerr", "--timestamp", "T", out=tmp_path).returncode == 0
    assert (tmp_path / "kerr-T.csv").exists()
    assert (tmp_path / "kerr-T-1.csv").exists()
    assert (tmp_path / "kerr-T.csv").read_bytes() == (tmp_path / "kerr-T-1.csv").read_bytes()


def test_overrides_are_echoed(tmp_path):
    proc = run("kerr", "--preset", "kerr", "--set", "physics.chi=0.5", "--set",
               "experiment.id=\"half\"", "--timestamp", "T", out=tmp_path)
    assert proc.returncode == 0, proc.stderr
    manifest = json.loads((tmp_path / "half-T.manifest.json").read_text())
    assert manifest["config"]["physics"]["chi"] == 0.5


@pytest.mark.parametrize(
    "args",
    [
        ["kerr", "--preset", "kerr", "--set", "physics.bogus=1"],
        ["kerr", "--preset", "kerr", "--set", "physics.chi=\"fast\""],
        ["kerr", "--preset", "kerr", "--set", "physics.chi=-1"],
        ["kerr", "--preset", "kerr", "--set", "numerics.n_max=5"],
        ["kerr", "--preset", "no-such-preset"],
        ["rabi", "--preset", "kerr"],
        ["sweep", "--preset", "fig2-nbar4", "--verify-numeric", "2"],
        ["kerr", "--jobs", "many"],
        ["frobnicate"],
    ],
)
def test_config_errors_exit_2(tmp_path, args):
    proc = run(*args, out=tmp_path)
    assert proc.returncode == 2, proc.stderr
    assert error_record(proc)["exit_code"] == 2
    assert not list(tmp_path.glob("*.csv"))


def test_numerical_failure_exits_3(tmp_path):
    proc = run("steady", "--preset", "decay-2ph", "--set", "numerics.max_time=0.5", out=tmp_path)
    assert proc.returncode == 3, proc.stderr
    rec = error_record(proc)
    assert rec["kind"] == "NoConvergence"
    assert rec["command"] == "steady"


def test_sweep_verification_and_job_independence(tmp_path):
    args = ["sweep", "--set", "numerics.re_points=5", "--set", "numerics.im_points=4",
            "--verify-numeric", "0.05", "--timestamp", "T"]
    one = run(*args, "--jobs", "1", "--set", "experiment.id=\"one\"", out=tmp_path)
    many = run(*args, "--jobs", "3", "--set", "experiment.id=\"many\"", out=tmp_path)
    assert one.returncode == 0 and many.returncode == 0, one.stderr + many.stderr
    a = (tmp_path / "one-T.csv").read_bytes()
    assert a == (tmp_path / "many-T.csv").read_bytes()
    rows = list(csv.DictReader(a.decode().splitlines()))
    verified = [r for r in rows if r["status"] == "verified"]
    assert len(verified) == 1
    assert float(verified[0]["trace_distance"]) < 1e-3
