"""Conflict-driven clause-learning SAT solver with assumptions, projected
model enumeration, and a sequential-counter cardinality encoding.

Two-watched-literal propagation, first-UIP learning with cheap clause
minimisation, activity branching (decay 0.95), Luby restarts (base 64),
phase saving.  No clause deletion.  Everything is deterministic: identical
inputs and budget outcomes give identical results.

A solver instance is single-use.  Budgets combine a wall-clock deadline and
a conflict cap; whichever trips first ends the search with UNKNOWN.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cnf import CnfInstance, Lit, Provenance

_RESCALE = 1e100
_DECAY = 0.95
_LUBY_BASE = 64


@dataclass
class Budget:
    deadline: Optional[float] = None      # absolute time.monotonic() value
    conflict_cap: Optional[int] = None

    @staticmethod
    def of(seconds: Optional[float] = None, conflicts: Optional[int] = None) -> "Budget":
        return Budget(None if seconds is None else time.monotonic() + seconds, conflicts)

    def time_left(self) -> bool:
        return self.deadline is None or time.monotonic() < self.deadline


@dataclass(frozen=True)
class SatResult:
    status: str                                  # SAT | UNSAT | UNKNOWN
    assignment: Optional[tuple[bool, ...]] = None  # 1-based: assignment[v]
    failed_assumptions: frozenset[Lit] = frozenset()
    reason: Optional[str] = None                 # timeout | conflict-budget
    conflicts: int = 0


def luby(i: int) -> int:
    # the i-th term (1-based) of the Luby restart sequence
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while i > (1 << k) - 1:
        i -= (1 << k) - 1
        k_inner = 1
        while (1 << (k_inner + 1)) - 1 <= i:
            k_inner += 1
        k = k_inner
    return 1 << (k - 1)


class Solver:
    def __init__(self, num_vars: int, clauses: Sequence[Sequence[Lit]]):
        n = num_vars
        self.n = n
        self.assigns = [0] * (n + 1)          # 0 unassigned, 1 true, -1 false
        self.level = [0] * (n + 1)
        self.reason: list[Optional[list[Lit]]] = [None] * (n + 1)
        self.activity = [0.0] * (n + 1)
        self.saved_phase = [-1] * (n + 1)
        self.var_inc = 1.0
        self.watches: list[list[list[Lit]]] = [[] for _ in range(2 * n + 2)]
        self.trail: list[Lit] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.conflicts = 0
        self._order: list[tuple[float, int]] = []
        for c in clauses:
            if not self._add_clause(list(c)):
                self.ok = False
                break

    # literal helpers -------------------------------------------------------

    @staticmethod
    def _enc(l: Lit) -> int:
        return (l << 1) if l > 0 else ((-l << 1) | 1)

    def _val(self, l: Lit) -> int:
        a = self.assigns[l] if l > 0 else -self.assigns[-l]
        return a

    # construction ----------------------------------------------------------

    def _add_clause(self, c: list[Lit]) -> bool:
        # construction happens at level 0: drop false lits, skip satisfied
        # clauses and tautologies
        cs = set(c)
        if any(-l in cs for l in cs):
            return True
        if any(self._val(l) == 1 for l in cs):
            return True
        c = sorted((l for l in cs if self._val(l) != -1), key=abs)
        if not c:
            return False
        if len(c) == 1:
            return self._enqueue(c[0], None)
        self.watches[self._enc(-c[0])].append(c)
        self.watches[self._enc(-c[1])].append(c)
        return True

    def add_clause(self, c: Sequence[Lit]) -> bool:
        """Add a clause between solve calls.  Returns False once the instance
        is unsatisfiable at level 0."""
        self._backtrack(0)
        if self.ok and not self._add_clause(list(c)):
            self.ok = False
        return self.ok

    # assignment ------------------------------------------------------------

    def _enqueue(self, l: Lit, why: Optional[list[Lit]]) -> bool:
        v = self._val(l)
        if v == 1:
            return True
        if v == -1:
            return False
        var = abs(l)
        self.assigns[var] = 1 if l > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = why
        self.trail.append(l)
        return True

    def _decide(self, l: Lit) -> None:
        self.trail_lim.append(len(self.trail))
        self._enqueue(l, None)

    def _backtrack(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        bound = self.trail_lim[target]
        for i in range(len(self.trail) - 1, bound - 1, -1):
            l = self.trail[i]
            var = abs(l)
            self.saved_phase[var] = self.assigns[var]
            self.assigns[var] = 0
            self.reason[var] = None
            heapq.heappush(self._order, (-self.activity[var], var))
        del self.trail[bound:]
        del self.trail_lim[target:]
        self.qhead = len(self.trail)

    # propagation -----------------------------------------------------------

    def _propagate(self) -> Optional[list[Lit]]:
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            # clauses watching -p live under enc(p): stored keyed by the
            # negation of the watched literal
            wl = self.watches[self._enc(p)]
            i = j = 0
            n = len(wl)
            while i < n:
                c = wl[i]
                i += 1
                if c[0] == -p:
                    c[0] = c[1]
                    c[1] = -p
                first = c[0]
                if self._val(first) == 1:
                    wl[j] = c
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    if self._val(c[k]) != -1:
                        c[1] = c[k]
                        c[k] = -p
                        self.watches[self._enc(-c[1])].append(c)
                        moved = True
                        break
                if moved:
                    continue
                wl[j] = c
                j += 1
                if self._val(first) == -1:
                    while i < n:
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    self.qhead = len(self.trail)
                    return c
                self._enqueue_unchecked(first, c)
            del wl[j:]
        return None

    def _enqueue_unchecked(self, l: Lit, why: list[Lit]) -> None:
        var = abs(l)
        self.assigns[var] = 1 if l > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = why
        self.trail.append(l)

    # learning --------------------------------------------------------------

    def _bump(self, var: int) -> None:
        self.activity[var] += self.var_inc
        if self.activity[var] > _RESCALE:
            inv = 1.0 / _RESCALE
            for v in range(1, self.n + 1):
                self.activity[v] *= inv
            self.var_inc *= inv
        heapq.heappush(self._order, (-self.activity[var], var))

    def _analyze(self, confl: list[Lit]) -> tuple[list[Lit], int]:
        current = len(self.trail_lim)
        seen = bytearray(self.n + 1)
        learnt: list[Lit] = [0]
        counter = 0
        p: Optional[Lit] = None
        idx = len(self.trail) - 1
        c = confl
        while True:
            start = 0 if p is None else 1
            for q in c[start:]:
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = abs(p)
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            c = self.reason[v]    # invariant: c[0] == p for implied literals
        learnt[0] = -p
        # drop literals whose whole reason is already in the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = self.reason[abs(q)]
            if r is not None and all(
                    seen[abs(x)] or self.level[abs(x)] == 0 for x in r if x != -q):
                continue
            keep.append(q)
        learnt = keep
        if len(learnt) == 1:
            bt = 0
        else:
            # move the second-highest-level literal into watch position 1
            max_i = 1
            for i in range(2, len(learnt)):
                if self.level[abs(learnt[i])] > self.level[abs(learnt[max_i])]:
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            bt = self.level[abs(learnt[1])]
        return learnt, bt

    def _analyze_final(self, p: Lit) -> frozenset[Lit]:
        """Core for an assumption literal p found false: {p} plus every
        assumption decision in the implication closure of ¬p."""
        failed = {p}
        if self.level[abs(p)] == 0:
            return frozenset(failed)
        seen = bytearray(self.n + 1)
        seen[abs(p)] = 1
        for i in range(len(self.trail) - 1, -1, -1):
            l = self.trail[i]
            v = abs(l)
            if not seen[v]:
                continue
            seen[v] = 0
            r = self.reason[v]
            if r is None:
                if self.level[v] > 0:
                    failed.add(l)
            else:
                for q in r[1:]:
                    if self.level[abs(q)] > 0:
                        seen[abs(q)] = 1
        return frozenset(failed)

    # search ----------------------------------------------------------------

    def _pick_branch(self) -> Lit:
        while self._order:
            negact, var = heapq.heappop(self._order)
            if self.assigns[var] == 0 and -negact == self.activity[var]:
                phase = self.saved_phase[var]
                return var if phase == 1 else -var
        best, best_act = 0, -1.0
        for v in range(1, self.n + 1):
            if self.assigns[v] == 0 and self.activity[v] > best_act:
                best, best_act = v, self.activity[v]
        if best == 0:
            return 0
        return best if self.saved_phase[best] == 1 else -best

    def solve(self, assumptions: Sequence[Lit] = (), budget: Optional[Budget] = None) -> SatResult:
        if not self.ok:
            return SatResult("UNSAT", failed_assumptions=frozenset(), conflicts=0)
        budget = budget or Budget()
        assumptions = list(assumptions)
        self._order = [(-self.activity[v], v) for v in range(1, self.n + 1)]
        heapq.heapify(self._order)
        restart_idx = 1
        conflicts_until_restart = _LUBY_BASE * luby(restart_idx)

        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if len(self.trail_lim) == 0:
                    return SatResult("UNSAT", conflicts=self.conflicts)
                learnt, bt = self._analyze(confl)
                self.var_inc /= _DECAY
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[self._enc(-learnt[0])].append(learnt)
                    self.watches[self._enc(-learnt[1])].append(learnt)
                    self._enqueue(learnt[0], learnt)
                conflicts_until_restart -= 1
                if budget.conflict_cap is not None and self.conflicts >= budget.conflict_cap:
                    return SatResult("UNKNOWN", reason="conflict-budget", conflicts=self.conflicts)
                if self.conflicts % 256 == 0 and not budget.time_left():
                    return SatResult("UNKNOWN", reason="timeout", conflicts=self.conflicts)
                continue
            if conflicts_until_restart <= 0:
                restart_idx += 1
                conflicts_until_restart = _LUBY_BASE * luby(restart_idx)
                self._backtrack(0)
                continue
            if not budget.time_left():
                return SatResult("UNKNOWN", reason="timeout", conflicts=self.conflicts)
            # place pending assumptions as pseudo-decisions
            if len(self.trail_lim) < len(assumptions):
                p = assumptions[len(self.trail_lim)]
                v = self._val(p)
                if v == 1:
                    self.trail_lim.append(len(self.trail))   # dummy level
                    continue
                if v == -1:
                    failed = self._analyze_final(p)
                    return SatResult("UNSAT", failed_assumptions=failed,
                                     conflicts=self.conflicts)
                self._decide(p)
                continue
            l = self._pick_branch()
            if l == 0:
                model = tuple(self.assigns[v] == 1 for v in range(0, self.n + 1))
                return SatResult("SAT", assignment=model, conflicts=self.conflicts)
            self._decide(l)


def _verify_model(cnf: CnfInstance, assignment: tuple[bool, ...]) -> bool:
    for clause in cnf.clauses:
        if not any(assignment[l] if l > 0 else not assignment[-l] for l in clause):
            return False
    return True


def solve(cnf: CnfInstance, assumptions: Sequence[Lit] = (),
          budget: Optional[Budget] = None) -> SatResult:
    """One-shot solve; SAT assignments are re-verified against every clause."""
    s = Solver(cnf.num_vars, cnf.clauses)
    result = s.solve(assumptions, budget)
    if result.status == "SAT":
        assert _verify_model(cnf, result.assignment), "model fails verification"
    return result


@dataclass
class EnumerationResult:
    models: list[tuple[bool, ...]] = field(default_factory=list)
    exhausted: bool = False
    unknown_reason: Optional[str] = None
    conflicts: int = 0


def enumerate_models(cnf: CnfInstance, projection_vars: Sequence[int],
                     limit: int, budget: Optional[Budget] = None) -> EnumerationResult:
    """Up to `limit` assignments pairwise distinct on the projection variables.

    One incremental solver serves every round; each model found is blocked by
    a clause over the projection variables before the next solve.
    """
    out = EnumerationResult()
    proj = sorted(set(projection_vars))
    s = Solver(cnf.num_vars, cnf.clauses)
    while len(out.models) < limit:
        r = s.solve(budget=budget)
        out.conflicts = r.conflicts  # the shared solver's count is cumulative
        if r.status == "UNKNOWN":
            out.unknown_reason = r.reason
            return out
        if r.status == "UNSAT":
            out.exhausted = True
            return out
        assert _verify_model(cnf, r.assignment), "model fails verification"
        out.models.append(r.assignment)
        if not proj:
            # no projection variables: the single projected model is it
            out.exhausted = True
            return out
        if not s.add_clause(tuple(-v if r.assignment[v] else v for v in proj)):
            out.exhausted = True
            return out
    return out


def add_at_most_k(cnf: CnfInstance, lits: Sequence[Lit], k: int,
                  prov: Optional[Provenance] = None) -> None:
    """Sequential-counter encoding of "at most k of lits are true"."""
    prov = prov or Provenance("cardinality")
    n = len(lits)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= n:
        return
    if k == 0:
        for l in lits:
            cnf.add((-l,), prov)
        return
    # registers s[i][j]: among the first i+1 lits, at least j+1 are true
    regs = [[cnf.new_var() for _ in range(k)] for _ in range(n - 1)]
    cnf.add((-lits[0], regs[0][0]), prov)
    for j in range(1, k):
        cnf.add((-regs[0][j],), prov)
    for i in range(1, n - 1):
        cnf.add((-lits[i], regs[i][0]), prov)
        cnf.add((-regs[i - 1][0], regs[i][0]), prov)
        for j in range(1, k):
            cnf.add((-lits[i], -regs[i - 1][j - 1], regs[i][j]), prov)
            cnf.add((-regs[i - 1][j], regs[i][j]), prov)
        cnf.add((-lits[i], -regs[i - 1][k - 1]), prov)
    cnf.add((-lits[n - 1], -regs[n - 2][k - 1]), prov)
