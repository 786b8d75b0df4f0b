import json
import subprocess
import sys

import numpy as np
import pytest

from thermolab import __version__
from thermolab.cli import SchemaError, main, run, validate, validate_common


def _run(tmp_path, *argv):
    out = tmp_path / "out"
    rc = main([*argv, "--out", str(out)])
    return rc, out


def test_mub_build(tmp_path):
    rc, out = _run(tmp_path, "mub-build", "--dim", "3")
    assert rc == 0
    rep = json.loads((out / "mub_report.json").read_text())
    assert rep["n_bases"] == 4 and rep["all_pass"]
    fam = json.loads((out / "mub_family.json").read_text())
    assert len(fam["bases"]) == 4


def test_spinnet_surface_header(tmp_path):
    rc, out = _run(tmp_path, "spinnet-surface", "--N", "3", "--k", "1", "--J0", "1")
    assert rc == 0
    doc = json.loads((out / "surface_weights.json").read_text())
    assert doc["header"]["d_R"] == 3
    assert doc["header"]["normalization"] == "1"
    lines = (out / "surface_weights.csv").read_text().splitlines()
    assert lines[0].split(",")[:4] == ["J_S", "x", "W_S", "W_E"]
    assert len(lines) == 3


def test_manifest_contents(tmp_path):
    rc, out = _run(tmp_path, "spinnet-boundary", "--E", "4", "--L", "2", "--seed", "7")
    assert rc == 0
    man = json.loads((out / "manifest.json").read_text())
    for key in ("config", "seed", "workers", "version", "backend", "rng", "started", "finished", "outputs"):
        assert key in man
    assert man["seed"] == 7 and man["version"] == __version__
    assert set(man["outputs"]) == {"boundary_report.json"}


def test_replay_identical(tmp_path, capsys):
    rc, out = _run(tmp_path, "levels", "--L", "10", "--seed", "3")
    assert rc == 0
    assert main(["replay", str(out / "manifest.json")]) == 0
    assert "all outputs identical" in capsys.readouterr().out


def test_replay_detects_changed_seed(tmp_path):
    rc, out = _run(tmp_path, "levels", "--L", "10", "--seed", "3")
    assert main(["replay", str(out / "manifest.json"), "--seed", "4"]) == 1


def test_replay_version_mismatch_warns(tmp_path, capsys):
    rc, out = _run(tmp_path, "levels", "--L", "10")
    man = json.loads((out / "manifest.json").read_text())
    man["version"] = "0.0.0"
    (out / "manifest.json").write_text(json.dumps(man))
    assert main(["replay", str(out / "manifest.json")]) == 0
    text = capsys.readouterr().out
    assert "warning" in text and "all outputs match" in text


def test_workers_do_not_change_outputs(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    args = ["mbl-dynamics", "--L", "6", "--ndis", "3", "--npoints", "20", "--tmax", "10", "--fit_tmax", "10"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b), "--workers", "2"]) == 0
    ma = json.loads((a / "manifest.json").read_text())["outputs"]
    mb = json.loads((b / "manifest.json").read_text())["outputs"]
    assert ma == mb
    assert {"magnetization_x.csv", "entropies.csv", "log_fit.json"} <= set(ma)


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"N": 4, "k": 1, "J0": 2, "seed": 11}))
    rc, out = _run(tmp_path, "spinnet-surface", "--config", str(cfg), "--J0", "1")
    assert rc == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["J0"] == 1 and man["config"]["N"] == 4 and man["seed"] == 11


def test_schema_errors_exit_2(tmp_path, capsys):
    rc, _ = _run(tmp_path, "mub-build", "--dim", "4")
    assert rc == 2
    assert "dim" in capsys.readouterr().err
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"N": 3, "k": 1, "J0": 1, "bogus": 1}))
    rc, _ = _run(tmp_path, "spinnet-surface", "--config", str(cfg))
    assert rc == 2
    rc, _ = _run(tmp_path, "levels", "--seed", "-1")
    assert rc == 2


def test_resource_error_exit_3(tmp_path):
    rc, _ = _run(tmp_path, "mbl-dynamics", "--L", "14", "--ndis", "1")
    assert rc == 3


def test_validate_defaults():
    cfg = validate("mbl-dynamics", {})
    assert cfg["L"] == 10 and cfg["W"] == 10 and cfg["ndis"] == 50 and cfg["axis"] == "x"
    with pytest.raises(SchemaError):
        validate("eth-scan", {"L": [6, "x"]})
    with pytest.raises(SchemaError):
        validate_common({"seed": 2**64})
    assert validate_common({}) == {"seed": 0, "workers": 1}


def test_csv_float_format(tmp_path):
    out = tmp_path / "o"
    run("theorem-scan", {"Nmin": 14, "Nmax": 16}, {}, out)
    row = (out / "theorem_scan.csv").read_text().splitlines()[1].split(",")
    assert float(row[1]) == float(np.float64(row[1]))


def test_console_entry_point(tmp_path):
    out = tmp_path / "m"
    res = subprocess.run([sys.executable, "-m", "thermolab.cli", "mub-build", "--dim", "5", "--out", str(out)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert (out / "manifest.json").exists()
