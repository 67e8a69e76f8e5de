import csv
import io
import json
import subprocess
import sys

import pytest

from entangle_census.cli import _dec, run
from entangle_census.family import builtin, family_to_json


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dec_shorthands():
    assert _dec("1e45") == 10 ** 45
    assert _dec("10^36") == 10 ** 36
    assert _dec("12345") == 12345


def test_density_prints_fraction(capsys):
    code, out, _ = call(capsys, "density", "--family", "F1", "--ell", "2")
    assert code == 0 and out.strip() == "1/2"


def test_density_json_and_csv(capsys):
    code, out, _ = call(capsys, "density", "--family", "F1", "--ell", "7", "--method", "via-C", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"] == {"num": "16452", "den": "16807"}
    code, out, _ = call(capsys, "density", "--family", "F1", "--ell", "3", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["value"] == "2/3"


def test_count_csv(capsys):
    code, out, _ = call(capsys, "count", "--family", "F1", "--ladder", "1e30,1e36", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["X"] for r in rows] == [str(10 ** 30), str(10 ** 36)]
    assert int(rows[1]["count_F"]) == 2184


def test_enumerate_jsonl_to_file(capsys, tmp_path):
    path = tmp_path / "recs.jsonl"
    code, out, _ = call(capsys, "enumerate", "--family", "F1", "--X", "1e30", "--out", str(path))
    assert code == 0 and out == ""
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    assert rows and all(set(r) == {"a", "b", "A", "B", "H", "md", "in_C"} for r in rows)


def test_check_family_with_config(capsys, tmp_path):
    cfg = tmp_path / "f1.json"
    cfg.write_text(json.dumps(family_to_json(builtin("F1"))))
    code, out, _ = call(capsys, "check-family", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data["sigma"] == [2, 3] and data["d"] == 18


def test_invalid_config_is_data_error(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"A": {"degree": 2, "coeffs": ["-1", "0", "-1"]}, "B": {"degree": 3, "coeffs": ["1", "0", "0", "1"]}}))
    code, _, err = call(capsys, "check-family", "--config", str(cfg))
    assert code == 1 and "AssumptionError" in err


def test_euler_and_area(capsys):
    code, out, _ = call(capsys, "euler", "--family", "F2", "--z", "50")
    d = json.loads(out)
    assert code == 0 and d["lower_float"] <= d["upper_float"]
    code, out, _ = call(capsys, "area", "--family", "F1")
    assert code == 0 and abs(json.loads(out)[0]["value"] - 0.22606105419) < 1e-9


def test_predict_and_fit(capsys):
    code, out, _ = call(capsys, "predict", "--family", "F1", "--ladder", "1e30,1e33,1e36", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "X,count_F,count_Dz,count_C,pred_lo,pred_hi,ratio"
    code, out, _ = call(capsys, "fit", "--family", "F1", "--ladder", "1e30,1e33,1e36")
    assert code == 0 and abs(json.loads(out)["expected"] - 1 / 18 * 2) < 1e-15


def test_usage_errors(capsys):
    assert call(capsys, "density", "--ell", "2")[0] == 2
    assert call(capsys, "density", "--family", "F1")[0] == 2
    assert call(capsys, "count", "--family", "F1", "--ladder", "1e36,1e30")[0] == 2
    assert call(capsys, "count", "--family", "F1", "--X", "1e30", "--threads", "0")[0] == 2
    assert call(capsys, "nonsense")[0] == 2
    assert call(capsys, "lmfdb-check", "--ainvs", "1,2")[0] == 2


def test_lmfdb_offline_miss(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ENTANGLE_CACHE_DIR", str(tmp_path))
    code, out, _ = call(capsys, "lmfdb-check", "--ainvs", "0,-1,0,-1033,-12438", "--offline")
    assert code == 1 and out.strip() == "null"


def test_reference_check_exit_code(capsys):
    code, out, _ = call(capsys, "verify-paper", "--family", "F1")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "entangle_census.cli", "density", "--family", "F2", "--ell", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "116/125"
