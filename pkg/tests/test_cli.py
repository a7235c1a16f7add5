import json
import subprocess
import sys

import pytest

from casym.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_min(capsys):
    code, out, _ = run_cli("simulate", "--rule", "min", "--periodic", "110",
                           "--steps", "3", capsys=capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("steps=3")
    assert len(lines) == 5  # header + 4 rows
    assert set(lines[-1]) == {"0"}


def test_simulate_identity(capsys):
    code, out, _ = run_cli("simulate", "--rule", "identity", "--periodic", "ab",
                           "--steps", "2", capsys=capsys)
    rows = out.strip().splitlines()[1:]
    assert rows[0] == rows[1] == rows[2]


def test_simulate_fs_pgm(tmp_path, capsys):
    out_file = tmp_path / "d.pgm"
    code, out, _ = run_cli("simulate", "--rule", "fs", "--periodic", "# B B B",
                           "--steps", "8", "--render", "pgm",
                           "--out", str(out_file), capsys=capsys)
    assert code == 0
    data = out_file.read_bytes()
    assert data.startswith(b"P5\n")
    assert "first_gamma=6" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli("simulate", "--rule", "nope", "--periodic", "ab",
                           "--steps", "1", capsys=capsys)
    assert code == 2 and "error=parse" in err


def test_budget_exit_code(capsys):
    code, _, err = run_cli("--budget-cells", "4", "trace", "--rule", "min",
                           "--k", "1", "--T", "3", capsys=capsys)
    assert code == 3 and "error=budget" in err


def test_build_round_trip(capsys):
    from casym.rules import parse_rule
    from casym.constructions import build_tilde
    from casym.rules import elementary_rule
    code, out, _ = run_cli("build", "tilde", "--base", "elementary:110",
                           capsys=capsys)
    assert code == 0
    assert parse_rule(out) == build_tilde(elementary_rule(110))


def test_build_delta_precondition(capsys):
    code, _, err = run_cli("build", "delta", "--base", "shift", "--zero", "a",
                           capsys=capsys)
    assert code == 2


def test_build_spread(capsys):
    code, out, _ = run_cli("build", "spread", "--base", "shift", capsys=capsys)
    assert code == 0
    assert "alphabet: a b ⊥" in out


def test_trace_and_two_approx(capsys):
    code, out, _ = run_cli("trace", "--rule", "min", "--k", "1", "--T", "3",
                           capsys=capsys)
    assert code == 0 and "count=4" in out
    code, out, _ = run_cli("trace", "--rule", "min", "--k", "1", "--two-approx",
                           capsys=capsys)
    assert code == 0
    assert "1 -> 0" in out and "0 -> 1" not in out


def test_limit(capsys):
    code, out, _ = run_cli("limit", "--rule", "min", "--n", "3", "--t-max", "4",
                           capsys=capsys)
    assert code == 0
    assert "final_size=7" in out


def test_fs_rule_emission(capsys):
    code, out, _ = run_cli("fs", "rule", capsys=capsys)
    assert code == 0 and out.startswith("alphabet: B #")


def test_fs_euclid_svg(capsys):
    code, out, _ = run_cli("fs", "euclid", "--spacing", "3", capsys=capsys)
    assert code == 0 and "<svg" in out


def test_xs_commands(capsys):
    code, out, _ = run_cli("xs", "recognize", "γγ", capsys=capsys)
    assert code == 0 and "all-gamma" in out
    code, out, _ = run_cli("xs", "recognize", "L1 R1", capsys=capsys)
    assert code == 1
    code, out, _ = run_cli("xs", "classify", "B", "#", "B", capsys=capsys)
    assert code == 0 and "one-sharp" in out
    code, out, _ = run_cli("xs", "crosscheck", "--max-len", "1", "--depth", "2",
                           capsys=capsys)
    assert code == 0 and "soundness_failures=0" in out


def test_verify_json(capsys):
    code, out, _ = run_cli("verify", "sub-automaton", "--json", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and all(r["result"] == "PASS" for r in doc["records"])


def test_determinism(capsys):
    a = run_cli("trace", "--rule", "elementary:110", "--k", "1", "--T", "4",
                capsys=capsys)[1]
    b = run_cli("trace", "--rule", "elementary:110", "--k", "1", "--T", "4",
                capsys=capsys)[1]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "casym.cli", "xs",
                           "recognize", "B"], capture_output=True, text=True)
    assert proc.returncode == 0
