"""Explains unsatisfiable problems: minimal unsatisfiable cores over whole
constraints or over individual clauses, and best-possible approximate
solutions that satisfy as many constraints as can be satisfied at once.

Axiom clauses (totality, functionality, name axioms) are always hard; only
constraint assertion clauses ever get relaxed.  Definitional clauses are left
unguarded as well: they are implications defining auxiliary variables and are
satisfiable on their own, so they can never enter a core without their
constraint's assertion clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cnf import CnfInstance, Lit, Provenance
from .evaluator import check_constraints
from .grounder import DomainAssignment, Grounding, decode_model, ground
from .interpretation import Interpretation
from .sat import Budget, Solver, add_at_most_k
from .typecheck import TypedProblem

HIGH_LEVEL_MUS = "high-level-mus"
LOW_LEVEL_MUS = "low-level-mus"
APPROXIMATE = "approximate"


class NothingToDiagnose(Exception):
    """The problem (or clause set) is satisfiable; there is no core to find."""

    def __init__(self):
        super().__init__("nothing to diagnose")


@dataclass
class ClauseRef:
    clause_id: int            # index into the diagnosed CnfInstance
    literals: tuple[Lit, ...]
    provenance: Provenance


@dataclass
class DiagnosisReport:
    kind: str
    da: Optional[DomainAssignment] = None
    constraints: list[int] = field(default_factory=list)
    clauses: list[ClauseRef] = field(default_factory=list)
    interp: Optional[Interpretation] = None
    violated: list[int] = field(default_factory=list)
    satisfied_count: int = 0
    minimal: bool = True       # False when the budget cut minimisation short
    optimal: bool = True       # approximate reports only


# ---------------------------------------------------------------------------
# Selector plumbing


def _guard_constraints(grounding: Grounding) -> tuple[CnfInstance, dict[int, int]]:
    """Copy of the grounded CNF where every constraint assertion clause gets a
    per-constraint selector disjoined: selector true forces the clause."""
    cnf = grounding.cnf.copy()
    indices = sorted({p.constraint for p in cnf.provenance
                      if p.kind == "constraint"})
    selectors = {i: cnf.new_var() for i in indices}
    for pos, prov in enumerate(cnf.provenance):
        if prov.kind == "constraint":
            cnf.clauses[pos] = cnf.clauses[pos] + (-selectors[prov.constraint],)
    return cnf, selectors


def _guard_clauses(cnf: CnfInstance) -> tuple[CnfInstance, dict[int, int]]:
    """Copy where every single clause gets its own selector."""
    out = cnf.copy()
    selectors = {i: out.new_var() for i in range(len(out.clauses))}
    for i in range(len(out.clauses)):
        out.clauses[i] = out.clauses[i] + (-selectors[i],)
    return out, selectors


def _solve(cnf: CnfInstance, assumptions: Sequence[Lit], budget: Optional[Budget]):
    return Solver(cnf.num_vars, cnf.clauses).solve(assumptions, budget)


def _minimise(cnf: CnfInstance, selectors: dict[int, int], core: list[int],
              budget: Optional[Budget]) -> tuple[list[int], bool]:
    """Deletion-based MUS extraction over selector-guarded members.  Returns
    (core, minimal flag); the flag drops when the budget interrupts.

    A member kept after its deletion test stays necessary no matter what is
    deleted later (subsets of a satisfiable set are satisfiable), so one pass
    over the worklist suffices for true minimality."""
    untested = list(core)
    while untested:
        m = untested.pop(0)
        if m not in core:
            continue
        candidate = [x for x in core if x != m]
        r = _solve(cnf, [selectors[x] for x in candidate], budget)
        if r.status == "UNKNOWN":
            return core, False
        if r.status == "UNSAT":
            # m was redundant; the failed set may drop several more members
            core = [x for x in candidate if selectors[x] in r.failed_assumptions]
    return core, True


# ---------------------------------------------------------------------------
# Operations


def high_level_mus(tp: TypedProblem, da: DomainAssignment,
                   budget: Optional[Budget] = None) -> DiagnosisReport:
    """A minimal set of constraint indices that is unsatisfiable at da."""
    grounding = ground(tp, da)
    cnf, selectors = _guard_constraints(grounding)
    members = sorted(selectors)
    r = _solve(cnf, [selectors[i] for i in members], budget)
    if r.status == "SAT":
        raise NothingToDiagnose()
    if r.status == "UNKNOWN":
        return DiagnosisReport(HIGH_LEVEL_MUS, da=da, constraints=members,
                               minimal=False)
    core = [i for i in members if selectors[i] in r.failed_assumptions]
    core, minimal = _minimise(cnf, selectors, core, budget)
    return DiagnosisReport(HIGH_LEVEL_MUS, da=da, constraints=sorted(core),
                           minimal=minimal)


def low_level_mus(cnf: CnfInstance,
                  budget: Optional[Budget] = None) -> DiagnosisReport:
    """A minimal unsatisfiable subset of the clauses themselves; axiom clauses
    may appear, reported with their provenance."""
    guarded, selectors = _guard_clauses(cnf)
    members = sorted(selectors)
    r = _solve(guarded, [selectors[i] for i in members], budget)
    if r.status == "SAT":
        raise NothingToDiagnose()
    if r.status == "UNKNOWN":
        refs = [ClauseRef(i, cnf.clauses[i], cnf.provenance[i]) for i in members]
        return DiagnosisReport(LOW_LEVEL_MUS, clauses=refs, minimal=False)
    core = [i for i in members if selectors[i] in r.failed_assumptions]
    core, minimal = _minimise(guarded, selectors, core, budget)
    refs = [ClauseRef(i, cnf.clauses[i], cnf.provenance[i]) for i in sorted(core)]
    return DiagnosisReport(LOW_LEVEL_MUS, clauses=refs, minimal=minimal)


def approximate_solution(tp: TypedProblem, da: DomainAssignment,
                         budget: Optional[Budget] = None) -> DiagnosisReport:
    """An interpretation violating as few constraints as possible at da,
    found by raising the allowed violation count k until satisfiable."""
    grounding = ground(tp, da)
    base = Solver(grounding.cnf.num_vars, grounding.cnf.clauses).solve((), budget)
    if base.status == "SAT":
        raise NothingToDiagnose()
    if base.status == "UNKNOWN":
        return DiagnosisReport(APPROXIMATE, da=da, optimal=False)
    total = len(tp.problem.constraints)
    for k in range(1, total + 1):
        cnf, selectors = _guard_constraints(grounding)
        add_at_most_k(cnf, [-selectors[i] for i in sorted(selectors)], k)
        r = _solve(cnf, (), budget)
        if r.status == "UNKNOWN":
            return DiagnosisReport(APPROXIMATE, da=da, optimal=False)
        if r.status == "SAT":
            interp = decode_model(tp.problem, grounding, r.assignment)
            verdicts = check_constraints(interp, tp)
            violated = [i for i, ok in enumerate(verdicts) if not ok]
            return DiagnosisReport(
                APPROXIMATE, da=da, interp=interp, violated=violated,
                satisfied_count=total - len(violated))
    raise AssertionError("relaxing every constraint must leave the axioms satisfiable")
