import json
import subprocess
import sys
from pathlib import Path

import pytest

from limitset.cli import dumps_report, loads_report, main, run

DATA = Path(__file__).resolve().parent.parent / "data"


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_nilpotency_constant_rule():
    code, rep = run(["nilpotency", "--rule", str(DATA / "constant0.rule"), "--shift", "full"])
    assert code == 0 and rep["verdict"] == "Nilpotent(1)" and rep["replayed"]


def test_limitset_truncated_is_inconclusive():
    code, rep = run(["limitset", "--rule", str(DATA / "and.rule"), "--shift", "full", "--budget", "3"])
    assert code == 2 and rep["verdict"] == "Truncated"


def test_example_certificate():
    code, rep = run(["example", "riccati-not-in-image"])
    assert code == 0 and rep["result"]["steps_replayed"] == [True] * 4


@pytest.mark.parametrize(
    "argv",
    [
        ["example", "square-plus-one"],
        ["example", "square-plus-one-projective"],
        ["example", "riccati-density"],
        ["example", "riccati-shifted-preimage"],
        ["example", "riccati-recurrent"],
        ["example", "empty-limit"],
        ["example", "singleton-not-pointwise"],
        ["example", "strict-invariance"],
        ["example", "surjective-pointwise-nilpotent"],
        ["mixing", "--shift", "golden"],
        ["mixing", "--graph", str(DATA / "golden.graph")],
        ["image", "--rule", "and"],
        ["periodic", "--shift", "golden", "--period", "4", "--rule", "and"],
        ["chainrec", "--rule", "xor", "--config", "01", "--window", "0", "1"],
        ["spacetime", "check", "--rule", "xor", "--shift", str(DATA / "golden.sft"), "--jobs", "4"],
        ["nilpotency", "--rule", "eca:110", "--json"],
    ],
)
def test_decisive_commands(argv):
    code, rep = run(argv)
    assert code == 0, rep


def test_unknown_exits_two():
    argv = ["nilpotency", "--rule", "eca:8", "--max-power", "1", "--max-period", "1", "--chain-length", "1"]
    code, rep = run(argv)
    assert code == 2 and rep["verdict"] == "Unknown"


def test_exhausted_chain_exits_two():
    code, rep = run(["chainrec", "--rule", "constant0", "--config", "1", "--budget", "3"])
    assert code == 2 and rep["verdict"] == "Exhausted"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["limitset", "--rule", "xor", "--budget", "0"],
        ["limitset", "--rule", "xor", "--frobnicate"],
        ["nilpotency", "--rule", "missing.rule"],
        ["example", "nope"],
    ],
)
def test_usage_errors_exit_one(argv):
    assert run(argv)[0] == 1


def test_malformed_file_reports_line(tmp_path):
    bad = tmp_path / "bad.rule"
    bad.write_text("alphabet: 0 1\nmemory: 0\nrule: 0 -> 0\nrule: 0 -> 1\n")
    code, rep = run(["nilpotency", "--rule", str(bad)])
    assert code == 1 and f"{bad}:4:" in rep["result"]["error"]


def test_json_is_deterministic_and_round_trips():
    argv = ["--json", "limitset", "--rule", "xor", "--shift", "golden"]
    a, b = run(argv)[1], run(argv)[1]
    assert strip_timing(a) == strip_timing(b)
    text = dumps_report(strip_timing(a))
    assert dumps_report(loads_report(text)) == text


def test_main_prints_json(capsys):
    assert main(["mixing", "--shift", "full", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "Mixing" and set(rep) >= {"command", "verdict", "result", "timing", "exit_code"}


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "limitset", "example", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "riccati-not-in-image" in out.stdout
