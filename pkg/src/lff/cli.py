"""Batch front door: check, solve and diagnose problem files, run the HTTP
service, verify the shipped puzzle library, and mine usage logs into CSV.

Exit codes are a contract: 0 solutions (or ok), 1 no solution, 2 input
error, 3 timeout.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import cnf, corpus, diagnose, engine, grounder, typecheck
from .parser import parse_problem
from .sat import Budget

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_INPUT_ERROR = 2
EXIT_TIMEOUT = 3


def _read(path: str) -> Optional[str]:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        print(f"cannot read {path}: {e.strerror or e}", file=sys.stderr)
        return None


def _print_diags(diags) -> None:
    for d in diags:
        print(d.render(), file=sys.stderr)
        print(file=sys.stderr)


def _indented(block: str) -> str:
    return "\n".join("  " + ln for ln in block.splitlines())


def cmd_check(args) -> int:
    text = _read(args.file)
    if text is None:
        return EXIT_INPUT_ERROR
    out = engine.run(text, engine.SolveOptions(mode="check"))
    _print_diags(out.diagnostics)
    _print_diags(out.warnings)
    if out.kind != engine.CHECK_OK:
        return EXIT_INPUT_ERROR
    print("ok")
    return EXIT_OK


def _uniform_bounds(text: str, max_size: Optional[int]) -> dict:
    # --max-size caps every open sort; engine diagnostics cover a bad parse
    if max_size is None:
        return {}
    parsed = parse_problem(text)
    if isinstance(parsed, list):
        return {}
    return {s.name: (1, max_size) for s in parsed.open_sorts()}


def _export_dimacs(path: str, text: str, out: engine.SolveOutcome) -> None:
    if out.models:
        da = out.models[0][0]
    elif out.searched:
        da = out.searched[-1]
    else:
        print("nothing was ground; no DIMACS written", file=sys.stderr)
        return
    tp = typecheck.check(parse_problem(text))
    g = grounder.ground(tp, da)
    Path(path).write_text(cnf.write_dimacs(g.cnf), encoding="utf-8")
    print(f"wrote DIMACS for {da.describe()} to {path}", file=sys.stderr)


def cmd_solve(args) -> int:
    text = _read(args.file)
    if text is None:
        return EXIT_INPUT_ERROR
    opts = engine.SolveOptions(
        max_models=args.max_models,
        per_sort_bounds=_uniform_bounds(text, args.max_size),
        deadline=args.timeout)
    out = engine.run(text, opts)
    _print_diags(out.warnings)
    if out.kind == engine.INPUT_ERRORS:
        _print_diags(out.diagnostics)
        return EXIT_INPUT_ERROR
    _print_diags(out.diagnostics)  # resource trips ride along as errors
    if args.dimacs:
        _export_dimacs(args.dimacs, text, out)
    if out.kind == engine.TIMEOUT:
        print(f"timed out after {args.timeout:g}s; "
              f"{len(out.searched)} domain size(s) fully searched")
        return EXIT_TIMEOUT
    if out.kind == engine.NO_SOLUTION:
        if out.complete:
            print("No solution found. The bounded search space is exhausted.")
        else:
            print("No solution found, but the search was cut short.")
        return EXIT_NO_SOLUTION
    for i, (da, interp) in enumerate(out.models, 1):
        print(f"model {i} at {da.describe()}:")
        print(_indented(corpus.render_solution(interp).rstrip("\n")))
    n = len(out.models)
    if out.unique:
        print("1 model; unique within bounds.")
    elif out.exhausted:
        print(f"{n} models; none further within bounds.")
    else:
        print(f"{n} model(s) shown; more may exist.")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    text = _read(args.file)
    if text is None:
        return EXIT_INPUT_ERROR
    out = engine.run(text, engine.SolveOptions(max_models=1))
    _print_diags(out.warnings)
    if out.kind == engine.INPUT_ERRORS:
        _print_diags(out.diagnostics)
        return EXIT_INPUT_ERROR
    if out.kind == engine.TIMEOUT:
        print("timed out before the problem's status was known")
        return EXIT_TIMEOUT
    if out.models:
        print("The problem is satisfiable; nothing to diagnose.")
        return EXIT_OK

    tp = typecheck.check(parse_problem(text))
    da = (out.searched[0] if out.searched
          else grounder.domain_assignment(tp.problem, {}))
    budget = Budget.of(seconds=10.0)
    try:
        if args.mode == "mus":
            rep = diagnose.high_level_mus(tp, da, budget=budget)
        else:
            rep = diagnose.approximate_solution(tp, da, budget=budget)
    except diagnose.NothingToDiagnose:
        print("The problem is satisfiable; nothing to diagnose.")
        return EXIT_OK

    def src_of(i: int) -> str:
        c = tp.problem.constraints[i]
        return f"line {c.span.line}: {tp.problem.source[c.span.start:c.span.end]}"

    if rep.kind == diagnose.HIGH_LEVEL_MUS:
        if rep.minimal:
            print(f"minimal unsatisfiable constraint set at {da.describe()}:")
        else:
            print(f"unsatisfiable constraint set at {da.describe()} "
                  "(budget ran out before it was fully minimised):")
        for i in sorted(rep.constraints):
            print(f"  [{i + 1}] {src_of(i)}")
        if rep.minimal:
            print("Removing any one of these makes the rest satisfiable.")
    else:
        total = len(tp.problem.constraints)
        print(f"at {da.describe()}, at most {rep.satisfied_count} of {total} "
              "constraints hold together"
              + ("" if rep.optimal else " (bound not proven tight)"))
        for i in sorted(rep.violated):
            print(f"  violated [{i + 1}] {src_of(i)}")
        print("witness:")
        print(_indented(corpus.render_solution(rep.interp).rstrip("\n")))
    return EXIT_NO_SOLUTION


def cmd_serve(args) -> int:
    from . import service
    webui = Path(args.webui) if args.webui else None
    if webui is not None and not webui.is_dir():
        print(f"cannot serve UI from {webui}: not a directory", file=sys.stderr)
        return EXIT_INPUT_ERROR
    service.main(args.port, webui_dir=webui)
    return EXIT_OK


def cmd_corpus(args) -> int:
    results = corpus.verify_all()
    bad = 0
    for pid, ok, message in results:
        print(f"{'PASS' if ok else 'FAIL'} {pid}: {message}")
        bad += 0 if ok else 1
    if bad:
        print(f"{bad} of {len(results)} puzzles failed", file=sys.stderr)
    return EXIT_OK if bad == 0 else 1


def cmd_stats(args) -> int:
    raw = _read(args.logfile)
    if raw is None:
        return EXIT_INPUT_ERROR
    events = []
    for ln in raw.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        try:
            events.append(json.loads(ln))
        except json.JSONDecodeError:
            print("skipping unparsable log line", file=sys.stderr)
    w = csv.writer(sys.stdout)
    if args.intervals is not None:
        mine = sorted((e for e in events if e.get("sessionId") == args.intervals),
                      key=lambda e: e["timestamp"])
        w.writerow(["timestamp", "interval_secs", "action", "prev_action"])
        prev = None
        for e in mine:
            if prev is None:
                w.writerow([e["timestamp"], "", e["action"], ""])
            else:
                gap = (e["timestamp"] - prev["timestamp"]) / 1000.0
                w.writerow([e["timestamp"], f"{gap:.3f}", e["action"],
                            prev["action"]])
            prev = e
    else:
        days = Counter(
            datetime.fromtimestamp(e["timestamp"] / 1000.0, tz=timezone.utc)
            .date().isoformat()
            for e in events)
        w.writerow(["date", "count"])
        for day in sorted(days):
            w.writerow([day, days[day]])
    return EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="lff",
        description="finite model finding for many-sorted logic problems")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a problem file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("solve", help="search for models of a problem file")
    p.add_argument("file")
    p.add_argument("--max-models", type=int, default=2, metavar="N")
    p.add_argument("--max-size", type=int, metavar="K",
                   help="largest domain size tried for every open sort")
    p.add_argument("--timeout", type=float, default=10.0, metavar="S")
    p.add_argument("--dimacs", metavar="OUT",
                   help="write the ground CNF of the decisive size in DIMACS")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("diagnose", help="explain an unsatisfiable problem")
    p.add_argument("file")
    p.add_argument("--mode", choices=["mus", "approx"], default="mus")
    p.set_defaults(fn=cmd_diagnose)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int)
    p.add_argument("--webui", metavar="DIR",
                   help="also serve a built browser UI from this directory")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("corpus", help="operations on the shipped puzzles")
    p.add_argument("action", choices=["verify"])
    p.set_defaults(fn=cmd_corpus)

    p = sub.add_parser("stats", help="usage log to CSV")
    p.add_argument("logfile")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--by-day", action="store_true",
                   help="rows date,count (the default)")
    g.add_argument("--intervals", metavar="SESSION",
                   help="inter-arrival gaps for one session")
    p.set_defaults(fn=cmd_stats)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
