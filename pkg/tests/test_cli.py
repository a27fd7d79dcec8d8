import io
import json
import subprocess
import sys

from aseplattice.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_zl_examples():
    assert call("zl", "--rep", "4", "--L", "2") == (0, "1*abar + 1*abar^2 + 1*abar*bbar + 1*bbar + 1*bbar^2\n", "")
    assert call("zl", "--rep", "4", "--L", "0")[1] == "1\n"
    for rep in ("1", "2", "3", "enum1", "enum3"):
        assert call("zl", "--rep", rep, "--L", "2")[1] == "1*abar + 1*abar^2 + 1*abar*bbar + 1*bbar + 1*bbar^2\n"


def test_zl_raw_and_eval():
    assert call("zl", "--rep", "2", "--L", "2", "--raw")[1] == "5 + 4*c + 1*c^2 + 1*c*d + 4*d + 1*d^2\n"
    assert call("zl", "--rep", "3", "--L", "2", "--eval", "abar=2,bbar=1/2")[1] == "31/4\n"
    code, _, err = call("zl", "--rep", "2", "--L", "2", "--raw", "--eval", "c=1")
    assert code == 1 and err.startswith("MissingVariable")


def test_enumerate_json_lines():
    code, out, _ = call("enumerate", "--model", "R4", "--length", "2")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 6
    assert lines[-1]["summary"] and lines[-1]["count"] == 5
    assert lines[-1]["total_weight"] == "1*abar + 1*abar^2 + 1*abar*bbar + 1*bbar + 1*bbar^2"
    assert set(lines[0]) >= {"start_height", "rises", "step_labels", "vertex_labels", "mark", "boundary_weight"}


def test_enumerate_cap(monkeypatch):
    monkeypatch.setenv("ASEP_MAX_L", "2")
    code, _, err = call("enumerate", "--model", "R4", "--length", "3")
    assert code == 1 and err.startswith("LengthCapExceeded")


def test_enumerate_unbounded_model():
    code, _, err = call("enumerate", "--model", "R2", "--length", "1")
    assert code == 1 and err.startswith("UnboundedModel")


def test_map_golden():
    code, out, _ = call("map", "--from", "R1", "--to", "R4", "--path", "7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d")
    obj = json.loads(out)
    assert code == 0 and obj["mark"] == 14 and obj["weight"] == "1*abar^3*bbar^2"


def test_map_json_input():
    src = {"start_height": 1, "rises": [1, -1, 1, -1], "step_labels": ["unit", "beta", "unit", "alpha"]}
    code, out, _ = call("map", "--from", "R3_2", "--to", "R3_2", "--path", json.dumps(src))
    assert code == 0 and json.loads(out)["step_labels"][-1] == "alphabeta_neg"


def test_map_errors():
    assert call("map", "--from", "R1", "--to", "R4", "--path", "2: d d")[0] == 1
    code, _, err = call("map", "--from", "R4", "--to", "R3", "--path", "1: u d", "--mark", "0")
    assert code == 1 and err.startswith("UnsupportedMap")


def test_usage_errors():
    assert call("zl", "--rep", "9", "--L", "2")[0] == 2
    assert call("zl", "--rep", "1", "--L", "2", "--bogus")[0] == 2
    assert call()[0] == 2


def test_stationary_output():
    code, out, _ = call("stationary", "--L", "1", "--alpha", "1", "--beta", "1", "--check-mpa")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0
    assert lines[0] == {"tau": [0], "probability_num": 1, "probability_den": 2, "mpa_match": True}
    assert lines[-1] == {"summary": True, "mpa_match": True}


def test_verify_single_suite():
    code, out, _ = call("verify", "--suite", "dehp", "--L", "1")
    assert code == 0 and out.strip().endswith("checks passed")


def test_verify_all_subprocess():
    args = [sys.executable, "-m", "aseplattice.cli", "verify", "--suite", "all", "--L", "3"]
    first = subprocess.run(args, capture_output=True, text=True)
    second = subprocess.run(args, capture_output=True, text=True)
    assert first.returncode == 0, first.stdout + first.stderr
    assert first.stdout == second.stdout
    assert "FAIL" not in first.stdout
