import json
import subprocess
import sys

import pytest

from ekkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_g(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "g", "--args", "a=1", "b=0", "z=0.31,0.17",
                       "w=0.12,0.44", "tau=0,1")
    assert code == 0
    d = json.loads(out)
    assert d["fn"] == "g" and len(d["value"]) == 2 and d["tail_bound"] >= 0


def test_eval_classical(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "e2k", "--args", "k=3")
    assert code == 0 and abs(complex(*json.loads(out)["value"])) < 1e-10
    code, out, _ = run(capsys, "eval", "--fn", "wp", "--args", "z=0.3,0.4", "deriv=1")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["eval", "--fn", "g", "--args", "a=1"],
    ["eval", "--fn", "g", "--args", "q=1", "a=1", "b=1", "z=0.1", "w=0.2"],
    ["eval", "--fn", "f", "--args", "m"],
    ["verify"],
    ["verify", "--check", "bogus"],
    ["table", "--kind", "ek", "--tau", "1,-1"],
    ["corb", "--a", "-1", "--b", "0"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_single(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    code, text, err = run(capsys, "verify", "--check", "zeta-id", "--tau", "0,1", "--seed", "1",
                          "--no-timing", "--out", str(out))
    assert code == 0 and "1/1 passed" in err
    rec = json.loads(text)
    assert rec["check"] == "zeta-id" and rec["pass"] and rec["elapsed_ms"] == 0
    assert out.read_text() == text


def test_verify_deterministic(capsys):
    argv = ["verify", "--check", "quad", "--tau", "0.5,1", "--seed", "2", "--no-timing"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b


def test_verify_failure_exit(capsys):
    code, text, _ = run(capsys, "verify", "--check", "stasheff", "--tau", "0,1", "--seed", "1",
                        "--debug-sign-bug")
    assert code == 1 and not json.loads(text)["pass"]
    code, _, _ = run(capsys, "verify", "--check", "kron-id", "--tau", "0,1", "--seed", "1",
                     "--tol", "1e-30")
    assert code == 1


def test_table_csv(capsys, tmp_path):
    out = tmp_path / "ek.csv"
    code, _, _ = run(capsys, "table", "--kind", "ek", "--amax", "3", "--bmax", "4",
                     "--format", "csv", "--out", str(out))
    assert code == 0
    assert len(out.read_text().strip().splitlines()) == 21


def test_corb(capsys):
    code, out, _ = run(capsys, "corb", "--a", "1", "--b", "0")
    assert code == 0
    assert out.strip() == "-1 * G00 * Zb0 - 1 * G00 * Wb0 + 1 * G01"


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "ekkit.cli", "corb", "--a", "0", "--b", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1 * G01"
