"""The solve pipeline: parse, typecheck, then either stop (check mode) or
search domain sizes, ground, enumerate models, and decode interpretations.

Every failure is reported as a SolveOutcome value; the only exceptions this
module lets escape are genuine internal faults (a decoded model failing its
own constraints).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .diagnostics import Diagnostic
from .evaluator import check_constraints
from .grounder import (DomainAssignment, Grounding, GroundingLimitExceeded,
                       DEFAULT_ATOM_CAP, decode_model, ground, size_vectors)
from .interpretation import Interpretation, validate
from .parser import parse_problem
from .sat import Budget, enumerate_models
from .typecheck import TypedProblem, check

CHECK_OK = "check-ok"
INPUT_ERRORS = "input-errors"
NO_SOLUTION = "no-solution"
SOLUTIONS = "solutions"
TIMEOUT = "timeout"


@dataclass(frozen=True)
class SolveOptions:
    mode: str = "solve"                  # "check" | "solve"
    max_models: int = 2
    per_sort_bounds: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    deadline: float = 10.0
    symmetry_breaking: bool = False
    atom_cap: int = DEFAULT_ATOM_CAP

    def __post_init__(self):
        if self.mode not in ("check", "solve"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_models < 1:
            raise ValueError("max_models must be at least 1")
        if self.deadline <= 0:
            raise ValueError("deadline must be positive")


@dataclass
class Stats:
    runs: int = 0                       # size vectors ground and solved
    conflicts: int = 0
    wall_time: float = 0.0
    ground_sizes: list[tuple[str, int, int]] = field(default_factory=list)
    bounds: dict[str, tuple[int, int]] = field(default_factory=dict)


@dataclass
class SolveOutcome:
    kind: str
    diagnostics: list[Diagnostic] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)
    searched: list[DomainAssignment] = field(default_factory=list)
    complete: bool = False
    models: list[tuple[DomainAssignment, Interpretation]] = field(default_factory=list)
    unique: bool = False
    exhausted: bool = False
    stats: Stats = field(default_factory=Stats)


ProblemInput = Union[str, tuple[str, str, str]]


def assemble_problem_text(sorts: str, vocabulary: str, constraints: str) -> str:
    """The three submission boxes share one grammar with file input: they are
    joined under the literal section headers before parsing."""

    def block(header: str, body: str) -> str:
        body = body.rstrip("\n")
        return f"{header}\n{body}\n" if body else f"{header}\n"

    return (block("Sorts:", sorts)
            + block("Vocabulary:", vocabulary)
            + block("Constraints:", constraints))


def decode(assignment: Sequence[bool], grounding: Grounding,
           tp: TypedProblem) -> Interpretation:
    """Assignment -> Interpretation, verified against the independent
    evaluator and the interpretation validators before being returned."""
    interp = decode_model(tp.problem, grounding, assignment)
    faults = validate(tp.problem, interp)
    if faults:
        raise RuntimeError(f"decoded interpretation is malformed: {faults[0]}")
    verdicts = check_constraints(interp, tp)
    if not all(verdicts):
        bad = verdicts.index(False)
        raise RuntimeError(
            f"decoded interpretation violates constraint {bad}; "
            "grounding and evaluation disagree")
    return interp


def run(problem: ProblemInput, opts: Optional[SolveOptions] = None) -> SolveOutcome:
    opts = opts or SolveOptions()
    started = time.monotonic()
    text = problem if isinstance(problem, str) else assemble_problem_text(*problem)

    def done(outcome: SolveOutcome) -> SolveOutcome:
        outcome.stats.wall_time = time.monotonic() - started
        return outcome

    parsed = parse_problem(text)
    if isinstance(parsed, list):
        return done(SolveOutcome(INPUT_ERRORS, diagnostics=parsed))
    checked = check(parsed)
    if isinstance(checked, list):
        return done(SolveOutcome(INPUT_ERRORS, diagnostics=checked))
    tp = checked
    warnings = list(tp.warnings)

    if opts.mode == "check":
        return done(SolveOutcome(CHECK_OK, warnings=warnings))

    stats = Stats()
    stats.bounds = {
        s.name: opts.per_sort_bounds.get(s.name, (1, 4))
        for s in parsed.open_sorts()
    }
    deadline_at = started + opts.deadline
    searched: list[DomainAssignment] = []
    models: list[tuple[DomainAssignment, Interpretation]] = []
    all_exhausted = True
    resource: Optional[Diagnostic] = None

    for da in size_vectors(parsed, opts.per_sort_bounds):
        if time.monotonic() >= deadline_at:
            return done(SolveOutcome(
                TIMEOUT, warnings=warnings, searched=searched, models=models,
                complete=False, stats=stats))
        try:
            g = ground(tp, da, atom_cap=opts.atom_cap,
                       symmetry_breaking=opts.symmetry_breaking)
        except GroundingLimitExceeded as e:
            if resource is None:
                resource = Diagnostic(
                    severity="error", line=1, column=1,
                    offending_text=f"at sizes {da.describe()}",
                    message=str(e))
            all_exhausted = False
            continue
        stats.runs += 1
        stats.ground_sizes.append((da.describe(), g.cnf.num_vars, len(g.cnf.clauses)))
        budget = Budget(deadline=deadline_at)
        remaining = opts.max_models - len(models)
        res = enumerate_models(g.cnf, list(g.atoms.atom_vars()), remaining, budget)
        stats.conflicts += res.conflicts
        for assignment in res.models:
            models.append((da, decode(assignment, g, tp)))
        if res.unknown_reason is not None:
            return done(SolveOutcome(
                TIMEOUT, warnings=warnings, searched=searched, models=models,
                complete=False, stats=stats))
        if res.exhausted:
            searched.append(da)
        else:
            # stopped at the model cap inside this size
            all_exhausted = False
        if len(models) >= opts.max_models:
            break

    if models:
        outcome = SolveOutcome(
            SOLUTIONS, warnings=warnings, searched=searched, models=models,
            exhausted=all_exhausted,
            unique=all_exhausted and len(models) == 1,
            stats=stats)
        if resource is not None:
            outcome.diagnostics.append(resource)
        return done(outcome)
    if resource is not None and not searched:
        return done(SolveOutcome(
            INPUT_ERRORS, diagnostics=[resource], warnings=warnings, stats=stats))
    outcome = SolveOutcome(
        NO_SOLUTION, warnings=warnings, searched=searched,
        complete=all_exhausted, stats=stats)
    if resource is not None:
        outcome.diagnostics.append(resource)
    return done(outcome)
