import subprocess
import sys
from pathlib import Path

import pytest

from lff import corpus

PUZZLES = Path(corpus.__file__).resolve().parent / "puzzles"
MARY = PUZZLES / "mary-lamb" / "problem.lff"
LOGIC_GAMES = PUZZLES / "logic-games" / "problem.lff"

UNSAT = """Sorts:
thing enum: t.
Vocabulary:
predicate { p(thing). }
Constraints:
ALL x p(x).
ALL x ~p(x).
"""

UNSAT3 = """Sorts:
thing enum: t.
Vocabulary:
predicate { p(thing).  q(thing). }
Constraints:
ALL x p(x).
ALL x ~p(x).
ALL x q(x).
"""


def run(*argv):
    return subprocess.run([sys.executable, "-m", "lff.cli", *argv],
                          capture_output=True, text=True)


def test_check_ok():
    r = run("check", str(MARY))
    assert r.returncode == 0
    assert r.stdout.strip() == "ok"


def test_check_reports_type_error_on_stderr(tmp_path):
    bad = tmp_path / "bad.lff"
    bad.write_text(MARY.read_text().replace(
        "Constraints:", "Constraints:\nhad(Mary, SOME x lamb(x)).", 1))
    r = run("check", str(bad))
    assert r.returncode == 2
    for needle in ("Type mismatch with argument of had",
                   "expects argument 2 to be of type animal",
                   "SOME x lamb(x)",
                   "which is of type bool."):
        assert needle in r.stderr


def test_unreadable_file_exits_2(tmp_path):
    missing = tmp_path / "missing.lff"
    for cmd in ("check", "solve", "diagnose"):
        r = run(cmd, str(missing))
        assert r.returncode == 2, cmd
        assert "cannot read" in r.stderr


def test_solve_unique_puzzle():
    r = run("solve", str(LOGIC_GAMES))
    assert r.returncode == 0
    assert "model 1 at" in r.stdout
    assert "unique within bounds" in r.stdout
    assert "result(demons, eagles) = win" in r.stdout


def test_solve_many_models():
    r = run("solve", str(MARY), "--max-size", "1", "--max-models", "30")
    assert r.returncode == 0
    assert r.stdout.count("model ") >= 21


def test_solve_no_solution_exits_1(tmp_path):
    f = tmp_path / "unsat.lff"
    f.write_text(UNSAT)
    r = run("solve", str(f))
    assert r.returncode == 1
    assert "No solution found" in r.stdout


@pytest.mark.parametrize("satisfiable", [True, False])
def test_dimacs_export_re_solves_to_same_status(tmp_path, satisfiable):
    if satisfiable:
        src = LOGIC_GAMES
    else:
        src = tmp_path / "unsat.lff"
        src.write_text(UNSAT)
    out = tmp_path / "export.cnf"
    r = run("solve", str(src), "--dimacs", str(out))
    assert out.exists(), r.stderr
    from lff import cnf, sat
    res = sat.solve(cnf.read_dimacs(out.read_text()))
    assert res.status == ("SAT" if satisfiable else "UNSAT")


def test_diagnose_mus(tmp_path):
    f = tmp_path / "unsat3.lff"
    f.write_text(UNSAT3)
    r = run("diagnose", str(f))
    assert r.returncode == 1
    assert "[1]" in r.stdout and "[2]" in r.stdout
    assert "[3]" not in r.stdout
    assert "Removing any one" in r.stdout


def test_diagnose_approx(tmp_path):
    f = tmp_path / "unsat3.lff"
    f.write_text(UNSAT3)
    r = run("diagnose", str(f), "--mode", "approx")
    assert r.returncode == 1
    assert "2 of 3" in r.stdout
    assert "witness:" in r.stdout


def test_diagnose_satisfiable_input():
    r = run("diagnose", str(MARY))
    assert r.returncode == 0
    assert "nothing to diagnose" in r.stdout


def test_corpus_verify():
    r = run("corpus", "verify")
    assert r.returncode == 0, r.stdout + r.stderr
    lines = [l for l in r.stdout.splitlines() if l]
    assert len(lines) == 9
    assert all(l.startswith("PASS") for l in lines)


@pytest.fixture()
def usage_log(tmp_path):
    log = tmp_path / "usage.jsonl"
    log.write_text("\n".join([
        '{"timestamp": 1755820800000, "sessionId": "s1", "action": "check",'
        ' "outcomeKind": "check-ok", "durationMs": 5, "fullText": "x"}',
        '{"timestamp": 1755820860000, "sessionId": "s1", "action": "solve",'
        ' "outcomeKind": "solutions", "durationMs": 40, "fullText": "x"}',
        '{"timestamp": 1755907200000, "sessionId": "s2", "action": "solve",'
        ' "outcomeKind": "no-solution", "durationMs": 22, "fullText": "y"}',
    ]) + "\n")
    return log


def test_stats_by_day(usage_log):
    r = run("stats", str(usage_log), "--by-day")
    rows = r.stdout.strip().splitlines()
    assert rows == ["date,count", "2025-08-22,2", "2025-08-23,1"]
    assert run("stats", str(usage_log)).stdout == r.stdout  # the default view


def test_stats_intervals(usage_log):
    r = run("stats", str(usage_log), "--intervals", "s1")
    rows = r.stdout.strip().splitlines()
    assert rows[0] == "timestamp,interval_secs,action,prev_action"
    assert rows[1] == "1755820800000,,check,"
    assert rows[2] == "1755820860000,60.000,solve,check"
    assert len(rows) == 3  # s2 events excluded


def test_stats_unreadable_log(tmp_path):
    r = run("stats", str(tmp_path / "nolog"))
    assert r.returncode == 2


def test_timeout_exits_3(tmp_path):
    hard = tmp_path / "hard.lff"
    hard.write_text("""Sorts:
pigeon enum: p1, p2, p3, p4, p5, p6, p7, p8, p9, p10.
hole enum: h1, h2, h3, h4, h5, h6, h7, h8, h9.
Vocabulary:
function { sits(pigeon): hole. }
Constraints:
ALL x, y (x /= y -> sits(x) /= sits(y)).
""")
    r = run("solve", str(hard), "--timeout", "0.05")
    assert r.returncode == 3
    assert "timed out" in r.stdout


def test_serve_rejects_missing_webui_directory(tmp_path):
    r = run("serve", "--webui", str(tmp_path / "nowhere"))
    assert r.returncode == 2
    assert "not a directory" in r.stderr
