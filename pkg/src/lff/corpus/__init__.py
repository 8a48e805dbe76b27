"""Shipped puzzle library.

Each puzzle lives in its own directory under ``puzzles/``: the natural
language ``statement.txt``, the reference ``problem.lff``, a ``meta`` file
of ``key: value`` lines, and for single-solution puzzles a frozen
``solution.txt`` the solved model must reproduce line for line.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .. import engine
from ..interpretation import Interpretation

LEVELS = ("Beginner", "Intermediate", "Advanced", "Expert", "Logician")

VERIFY_DEADLINE = 5.0

_DATA = Path(__file__).resolve().parent / "puzzles"


@dataclass(frozen=True)
class PuzzleRecord:
    id: str
    title: str
    level: str
    statement: str
    reference_encoding: str
    expected_models: int
    bounds: dict[str, tuple[int, int]]
    solution: Optional[str]  # frozen table rendering, when the count is 1

    def summary(self) -> dict:
        return {"id": self.id, "title": self.title, "level": self.level,
                "expected_models": self.expected_models}


def render_solution(interp: Interpretation) -> str:
    """Canonical one-line-per-fact rendering used for frozen solutions."""
    lines = []
    for n, e in sorted(interp.names.items()):
        lines.append(f"{n} = {interp.label(e)}")
    for f, table in sorted(interp.functions.items()):
        for args, val in sorted(table.items()):
            a = ", ".join(interp.label(x) for x in args)
            lines.append(f"{f}({a}) = {interp.label(val)}")
    for p, ext in sorted(interp.predicates.items()):
        for args in sorted(ext):
            a = ", ".join(interp.label(x) for x in args)
            lines.append(f"{p}({a})")
    return "\n".join(lines) + "\n"


def _parse_bounds(text: str) -> dict[str, tuple[int, int]]:
    text = text.strip()
    if text in ("", "none"):
        return {}
    out = {}
    for part in text.split(","):
        sort, _, rng = part.strip().partition("=")
        lo, _, hi = rng.partition("..")
        out[sort.strip()] = (int(lo), int(hi))
    return out


def _read_record(d: Path) -> PuzzleRecord:
    meta = {}
    for line in (d / "meta").read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        meta[key.strip()] = value.strip()
    sol_file = d / "solution.txt"
    return PuzzleRecord(
        id=meta["id"],
        title=meta["title"],
        level=meta["level"],
        statement=(d / "statement.txt").read_text(),
        reference_encoding=(d / "problem.lff").read_text(),
        expected_models=int(meta["expected_models"]),
        bounds=_parse_bounds(meta.get("bounds", "none")),
        solution=sol_file.read_text() if sol_file.exists() else None,
    )


def load(puzzle_id: str) -> PuzzleRecord:
    d = _DATA / puzzle_id
    if not d.is_dir():
        raise KeyError(puzzle_id)
    return _read_record(d)


def list_puzzles(level: Optional[str] = None) -> list[PuzzleRecord]:
    """All shipped puzzles, ordered by level then id."""
    if level is not None and level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    records = [_read_record(d) for d in _DATA.iterdir() if d.is_dir()]
    if level is not None:
        records = [r for r in records if r.level == level]
    rank = {name: i for i, name in enumerate(LEVELS)}
    records.sort(key=lambda r: (rank[r.level], r.id))
    return records


def verify(record: PuzzleRecord) -> tuple[bool, str]:
    """Solve the reference encoding and compare against the frozen outcome."""
    opts = engine.SolveOptions(
        max_models=record.expected_models + 1,
        per_sort_bounds=record.bounds,
        deadline=VERIFY_DEADLINE,
    )
    t0 = time.monotonic()
    out = engine.run(record.reference_encoding, opts)
    elapsed = time.monotonic() - t0
    if out.kind != engine.SOLUTIONS:
        return False, f"{record.id}: outcome {out.kind}, wanted solutions"
    if not out.exhausted:
        return False, f"{record.id}: search not exhausted within bounds"
    if len(out.models) != record.expected_models:
        return False, (f"{record.id}: {len(out.models)} models, "
                       f"expected {record.expected_models}")
    if record.solution is not None:
        if record.expected_models != 1:
            return False, f"{record.id}: frozen solution needs a unique model"
        got = render_solution(out.models[0][1])
        if got != record.solution:
            return False, f"{record.id}: solved model differs from frozen solution"
    return True, f"{record.id}: ok ({len(out.models)} models, {elapsed:.2f}s)"


def verify_all() -> list[tuple[str, bool, str]]:
    results = []
    for record in list_puzzles():
        ok, message = verify(record)
        results.append((record.id, ok, message))
    return results
