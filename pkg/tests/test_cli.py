import csv
import io
import json
import math

import jsonschema
import pytest

from benford_exact.cli import load_schema, run
from benford_exact.core import benford_prob


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = invoke(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    return code, doc


def test_verify_trapz_passes(capsys):
    code, doc = report(capsys, "verify-trapz", "--a", "1.0", "--base", "10",
                       "--sigma", "0.0,0.5", "--m-trunc", "10000000")
    assert code == 0 and doc["pass"] is True
    assert doc["config"]["m-trunc"] == 10_000_000
    for row in doc["rows"]:
        sigma, total, bound, dev, poisson, ok = row
        assert ok and abs(total - 1) <= bound + 1e-9 and poisson == 1.0


def test_verify_trapz_fails_past_threshold(capsys):
    code, doc = report(capsys, "verify-trapz", "--h", "3.3", "--m-trunc", "100000")
    assert code == 1 and doc["pass"] is False
    assert doc["metrics"]["regime"].startswith("inadmissible")


def test_verify_law_inadmissible(capsys):
    code, doc = report(capsys, "verify-law", "--a", "2.5", "--base", "10", "--m-trunc", "100000")
    assert code == 1
    assert doc["pass"] is False
    assert doc["metrics"]["regime"] == "inadmissible: ln b >= pi/a"


def test_verify_law_admissible(capsys):
    code, doc = report(capsys, "verify-law", "--a", "1.0", "--base", "10", "--m-trunc", "1000000")
    assert code == 0 and doc["metrics"]["regime"] == "admissible: ln b < pi/a"


def test_digits_csv(capsys):
    code, out, _ = invoke(capsys, "digits", "--a", "1.0", "--base", "10", "--n", "1000000",
                          "--seed", "42")
    assert code == 0
    assert out.endswith("\n") and "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["d", "expected", "observed", "z_score"]
    assert len(rows) == 10
    assert sum(int(r[2]) for r in rows[1:]) == 1_000_000
    assert all(abs(float(r[3])) < 5 for r in rows[1:])
    # 17 significant digits round-trip
    assert float(rows[1][1]) == benford_prob(1, 10)


def test_digits_json_with_scale(capsys):
    code, doc = report(capsys, "digits", "--n", "100000", "--seed", "7", "--scale", "7.7",
                       "--format", "json")
    assert code == 0 and doc["metrics"]["chi_square"]["df"] == 8


def test_byte_identical(capsys):
    argv = ["digits", "--n", "20000", "--seed", "3", "--format", "json"]
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_sample_and_out_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    assert run(["sample", "--n", "100", "--seed", "5", "--out", str(path)]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["index", "y", "fraction", "digit"] and len(rows) == 101
    assert all(1 <= int(r[3]) <= 9 for r in rows[1:])


def test_piecewise(capsys):
    code, doc = report(capsys, "piecewise", "--base", "10", "--m0", "-2", "--m1", "1",
                       "--weights", "0.1,0.2,0.3,0.4", "--format", "json")
    assert code == 0 and doc["metrics"]["max_abs_deviation"] <= 1e-14


def test_moments(capsys):
    code, doc = report(capsys, "moments", "--a", "1", "--k-max", "4")
    assert code == 0
    vals = [r[2] for r in doc["rows"]]
    assert vals == sorted(vals) and doc["rows"][0][4] is None


@pytest.mark.parametrize("argv", [
    ["verify-trapz", "--base", "1"],
    ["verify-trapz", "--sigma", "1.0"],
    ["digits", "--a", "-1"],
    ["digits", "--seed", "-3"],
    ["sample", "--n", "0"],
    ["piecewise", "--weights", "0.5,0.6", "--m1", "1"],
    ["nonsense"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == 2 and err


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("BENFORD_EXACT_THREADS", "zero")
    code, _, err = invoke(capsys, "sample", "--n", "10")
    assert code == 2 and "BENFORD_EXACT_THREADS" in err
