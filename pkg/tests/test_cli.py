import csv
import io
import json
import subprocess
import sys

import pytest

from rscd.cli import main, parse_config, run

BASE = ["--n", "3", "--p", "1", "--M", "2", "--g", "0.5"]


def _run(argv):
    text, code = run(parse_config(argv))
    return text, code


def test_validate_ok():
    text, code = _run(["validate", *BASE])
    doc = json.loads(text)
    assert code == 0
    assert doc["valid"] and doc["coupling_type"] == "type_i" and doc["dimension"] == 6
    assert doc["schema_version"] == 1


def test_validate_invalid_reports_interval():
    text, code = _run(["validate", "--n", "4", "--p", "1", "--M", "-2", "--g", "1.2"])
    doc = json.loads(text)
    assert code == 2 and doc["valid"] is False
    assert doc["sgnM"] == -1 and len(doc["type_i_interval"]) == 2


def test_non_coprime_is_invalid():
    _, code = _run(["lattice", "--n", "4", "--p", "2", "--M", "1", "--g", "0.5"])
    assert code == 2


def test_spectrum_csv():
    text, code = _run(["spectrum", *BASE, "--format", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0
    assert rows[0] == ["index", "E_1", "E_2"]
    assert len(rows) == 7
    assert all(float(r[1]) == pytest.approx(float(r[2]), abs=1e-12) for r in rows[1:])


def test_output_is_deterministic():
    a, _ = _run(["eigenbasis", *BASE])
    b, _ = _run(["eigenbasis", *BASE])
    assert a == b
    c, _ = _run(["classical", *BASE, "--seed", "7"])
    d, _ = _run(["classical", *BASE, "--seed", "7"])
    assert c == d


def test_operators_subset():
    doc = json.loads(_run(["operators", *BASE, "--kind", "H", "--r", "1"])[0])
    assert [(o["kind"], o["r"]) for o in doc["operators"]] == [("H", 1)]
    assert doc["operators"][0]["dim"] == 6


def test_verify_passes():
    text, code = _run(["verify", *BASE])
    doc = json.loads(text)
    assert code == 0 and doc["passed"]
    assert all(c["pass"] for c in doc["checks"].values())


def test_verify_reports_failed_check():
    text, code = _run(["verify", "--n", "4", "--p", "1", "--M", "-2", "--g", "2.3"])
    doc = json.loads(text)
    assert code == 1 and not doc["passed"]
    assert not doc["checks"]["n0_formula"]["pass"]
    assert sum(not c["pass"] for c in doc["checks"].values()) == 1


def test_tolerance_override():
    text, code = _run(["verify", *BASE, "--tol", "tol_gram=1e-30"])
    assert code == 1 and not json.loads(text)["checks"]["gram"]["pass"]
    with pytest.raises(SystemExit):
        parse_config(["verify", *BASE, "--tol", "bogus=1"])


def test_output_file(tmp_path):
    out = tmp_path / "lat.json"
    assert main(["lattice", *BASE, "--output", str(out)]) == 0
    assert json.loads(out.read_text())["D"] == 6


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rscd.cli", "validate", *BASE], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["valid"]
