"""Compiles a type-correct problem at fixed domain sizes down to CNF.

Quantifiers expand over the finite domains.  Function and name symbols are
encoded relationally: one propositional variable per cell/value pair, with
exactly-one axioms (a single at-least-one clause plus pairwise at-most-one
clauses).  Atoms whose arguments contain function terms are expanded
innermost-first into value cases, so each emitted clause speaks only about
cell variables and predicate-tuple variables.  Ground integer arithmetic is
evaluated here, at grounding time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

from .cnf import (BExpr, CnfInstance, Clausifier, FALSE, Provenance, TRUE,
                  band, batom, biff, bimplies, bnot, bor, constraint_prov)
from .interpretation import (Element, Interpretation, SortDomain, arg_tuples,
                             element_for_int, int_value, make_domains)
from .syntax import (And, EnumLit, EnumSort, Eq, Exists, FalseConst, Forall,
                     FunApp, Iff, Implies, IntArith, IntCmp, IntLit,
                     IntRangeSort, NameRef, Neq, Not, OpenSort, Or, PredApp,
                     Problem, TrueConst, Var)
from .typecheck import TypedProblem

DEFAULT_ATOM_CAP = 2_000_000
DEFAULT_OPEN_BOUNDS = (1, 4)

Value = Union[Element, int]


class GroundingLimitExceeded(Exception):
    """Estimated ground atom count exceeds the configured cap."""

    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(
            f"grounding needs about {estimate} atoms, over the limit of {cap}; "
            "lower the domain bounds or split the problem")


@dataclass(frozen=True)
class DomainAssignment:
    """Per-sort cardinalities: pinned sorts at their declared size, open
    sorts at the candidate size under trial."""

    sizes: Mapping[str, int]
    open_sorts: tuple[str, ...]

    def open_sizes(self) -> dict[str, int]:
        return {s: self.sizes[s] for s in self.open_sorts}

    def describe(self) -> str:
        return ", ".join(f"|{s}|={self.sizes[s]}" for s in self.open_sorts) or "all sorts pinned"


def domain_assignment(problem: Problem, open_sizes: Mapping[str, int]) -> DomainAssignment:
    sizes: dict[str, int] = {}
    opens: list[str] = []
    for decl in problem.sorts:
        if isinstance(decl.kind, OpenSort):
            n = open_sizes[decl.name]
            if n < 1:
                raise ValueError(f"size for open sort {decl.name} must be >= 1")
            sizes[decl.name] = n
            opens.append(decl.name)
        elif isinstance(decl.kind, EnumSort):
            sizes[decl.name] = len(decl.kind.elements)
        else:
            sizes[decl.name] = decl.kind.size
    return DomainAssignment(sizes, tuple(opens))


def size_vectors(problem: Problem,
                 bounds: Optional[Mapping[str, tuple[int, int]]] = None
                 ) -> Iterator[DomainAssignment]:
    """Candidate domain assignments, smallest total open size first, ties
    broken lexicographically by sort declaration order (larger earlier sort
    first)."""
    opens = [s.name for s in problem.open_sorts()]
    bounds = bounds or {}
    ranges = []
    for name in opens:
        lo, hi = bounds.get(name, DEFAULT_OPEN_BOUNDS)
        ranges.append(range(lo, hi + 1))
    vectors: list[tuple[int, ...]] = [()]
    for r in ranges:
        vectors = [v + (n,) for v in vectors for n in r]
    vectors.sort(key=lambda v: (sum(v), tuple(-n for n in v)))
    for v in vectors:
        yield domain_assignment(problem, dict(zip(opens, v)))


# ---------------------------------------------------------------------------
# Atom bookkeeping


@dataclass
class AtomMap:
    """Bijection between the non-auxiliary propositional variables and the
    ground atoms: predicate tuples, function cells, and name cells.  Variables
    above num_atom_vars are definitional auxiliaries."""

    num_atom_vars: int = 0
    index: dict[tuple, int] = field(default_factory=dict)
    atoms: list[tuple] = field(default_factory=list)

    def _alloc(self, key: tuple) -> int:
        var = self.num_atom_vars + 1
        self.num_atom_vars = var
        self.index[key] = var
        self.atoms.append(key)
        return var

    def pred_var(self, name: str, args: tuple[Element, ...]) -> int:
        return self.index[("pred", name, args)]

    def fun_var(self, name: str, args: tuple[Element, ...], value: Element) -> int:
        return self.index[("fun", name, args, value)]

    def name_var(self, name: str, value: Element) -> int:
        return self.index[("name", name, value)]

    def atom_of(self, var: int) -> tuple:
        assert 1 <= var <= self.num_atom_vars
        return self.atoms[var - 1]

    def is_aux(self, var: int) -> bool:
        return var > self.num_atom_vars

    def atom_vars(self) -> range:
        return range(1, self.num_atom_vars + 1)


@dataclass
class Grounding:
    cnf: CnfInstance
    atoms: AtomMap
    domains: dict[str, SortDomain]
    assignment: DomainAssignment


def estimate_atoms(problem: Problem, da: DomainAssignment) -> int:
    total = 0
    for p in problem.vocab.predicates:
        total += math.prod(da.sizes[s] for s in p.arg_sorts)
    for f in problem.vocab.functions:
        total += math.prod(da.sizes[s] for s in f.arg_sorts) * da.sizes[f.result_sort]
    for n in problem.vocab.names:
        total += da.sizes[n.sort]
    return total


# ---------------------------------------------------------------------------
# Grounding proper


def ground(tp: TypedProblem, da: DomainAssignment, *,
           atom_cap: int = DEFAULT_ATOM_CAP,
           symmetry_breaking: bool = False) -> Grounding:
    problem = tp.problem
    estimate = estimate_atoms(problem, da)
    if estimate > atom_cap:
        raise GroundingLimitExceeded(estimate, atom_cap)

    domains = make_domains(problem, da.open_sizes())
    shell = Interpretation(domains, {}, {}, {})
    atoms = AtomMap()

    # allocation order fixed to declaration order: predicates, functions, names
    for p in problem.vocab.predicates:
        for tup in arg_tuples(shell, p.arg_sorts):
            atoms._alloc(("pred", p.name, tup))
    for f in problem.vocab.functions:
        for tup in arg_tuples(shell, f.arg_sorts):
            for v in shell.elements(f.result_sort):
                atoms._alloc(("fun", f.name, tup, v))
    for n in problem.vocab.names:
        for v in shell.elements(n.sort):
            atoms._alloc(("name", n.name, v))

    cnf = CnfInstance(num_vars=atoms.num_atom_vars)
    clausifier = Clausifier(cnf)

    # exactly-one axioms for every function cell and name
    for f in problem.vocab.functions:
        for tup in arg_tuples(shell, f.arg_sorts):
            cell = tuple(shell.label(e) for e in tup)
            vs = [atoms.fun_var(f.name, tup, v) for v in shell.elements(f.result_sort)]
            cnf.add(tuple(vs), Provenance("totality", symbol=f.name, cell=cell))
            for i in range(len(vs)):
                for j in range(i + 1, len(vs)):
                    cnf.add((-vs[i], -vs[j]),
                            Provenance("functionality", symbol=f.name, cell=cell))
    for n in problem.vocab.names:
        vs = [atoms.name_var(n.name, v) for v in shell.elements(n.sort)]
        cnf.add(tuple(vs), Provenance("name-totality", symbol=n.name))
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                cnf.add((-vs[i], -vs[j]),
                        Provenance("name-functionality", symbol=n.name))

    translator = _Translator(problem, shell, atoms)
    for c in problem.constraints:
        expr = translator.formula(c.formula, {})
        clausifier.assert_expr(expr, constraint_prov(c.index))

    if symmetry_breaking:
        _break_symmetries(problem, shell, atoms, cnf)

    return Grounding(cnf, atoms, domains, da)


class _Translator:
    """Formula -> BExpr over ground atom variables, in a variable environment
    mapping bound variable names to elements."""

    def __init__(self, problem: Problem, shell: Interpretation, atoms: AtomMap):
        self.problem = problem
        self.vocab = problem.vocab
        self.shell = shell
        self.atoms = atoms
        self._enum_elem: dict[str, Element] = {}
        for decl in problem.sorts:
            if isinstance(decl.kind, EnumSort):
                for i, el in enumerate(decl.kind.elements):
                    self._enum_elem[el] = (decl.name, i)

    # formulas ------------------------------------------------------------

    def formula(self, f, env: dict[str, Element]) -> BExpr:
        if isinstance(f, TrueConst):
            return TRUE
        if isinstance(f, FalseConst):
            return FALSE
        if isinstance(f, Not):
            return bnot(self.formula(f.body, env))
        if isinstance(f, And):
            return band([self.formula(f.left, env), self.formula(f.right, env)])
        if isinstance(f, Or):
            return bor([self.formula(f.left, env), self.formula(f.right, env)])
        if isinstance(f, Implies):
            return bimplies(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, Iff):
            return biff(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, (Forall, Exists)):
            sort = f.inferred_sort or f.sort
            assert sort is not None, "quantifier reached the grounder unsorted"
            parts = []
            saved = env.get(f.var)
            for e in self.shell.elements(sort):
                env[f.var] = e
                parts.append(self.formula(f.body, env))
            if saved is None:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
            return band(parts) if isinstance(f, Forall) else bor(parts)
        if isinstance(f, PredApp):
            decl = self.vocab.predicate(f.name)
            return self._values(tuple(f.args), decl.arg_sorts, env, (),
                                lambda tup: batom(self.atoms.pred_var(f.name, tup)))
        if isinstance(f, Eq):
            return self._value(f.left, env,
                               lambda a: self._value(f.right, env,
                                                     lambda b: self._eq(a, b)))
        if isinstance(f, Neq):
            # same meaning as the negated equality, here and in evaluation
            return bnot(self.formula(Eq(f.left, f.right), env))
        if isinstance(f, IntCmp):
            return self._value(f.left, env,
                               lambda a: self._value(f.right, env,
                                                     lambda b: self._cmp(f.op, a, b)))
        raise TypeError(f"cannot ground {type(f).__name__}")

    # terms ----------------------------------------------------------------

    def _value(self, t, env: dict[str, Element],
               k: Callable[[Value], BExpr]) -> BExpr:
        if isinstance(t, Var):
            return k(env[t.name])
        if isinstance(t, EnumLit):
            return k(self._enum_elem[t.name])
        if isinstance(t, IntLit):
            return k(t.value)
        if isinstance(t, NameRef):
            decl = self.vocab.name_decl(t.name)
            cases = [bimplies(batom(self.atoms.name_var(t.name, v)), k(v))
                     for v in self.shell.elements(decl.sort)]
            return band(cases)
        if isinstance(t, IntArith):
            return self._value(t.left, env,
                               lambda a: self._value(t.right, env,
                                                     lambda b: k(self._arith(t.op, a, b))))
        if isinstance(t, FunApp):
            decl = self.vocab.function(t.name)

            def branch(tup: tuple[Element, ...]) -> BExpr:
                cases = [bimplies(batom(self.atoms.fun_var(t.name, tup, v)), k(v))
                         for v in self.shell.elements(decl.result_sort)]
                return band(cases)

            return self._values(t.args, decl.arg_sorts, env, (), branch)
        raise TypeError(f"cannot evaluate {type(t).__name__} as a term")

    def _values(self, terms: Sequence, sorts: Sequence[str],
                env: dict[str, Element], acc: tuple[Element, ...],
                k: Callable[[tuple[Element, ...]], BExpr]) -> BExpr:
        if not terms:
            return k(acc)

        def use(v: Value) -> BExpr:
            cv = self._coerce(v, sorts[0])
            if cv is None:
                # non-denoting argument: the whole atom is false
                return FALSE
            return self._values(terms[1:], sorts[1:], env, acc + (cv,), k)

        return self._value(terms[0], env, use)

    def _coerce(self, v: Value, sort: str) -> Optional[Element]:
        if isinstance(v, int):
            return element_for_int(self.problem, sort, v)
        return v

    def _to_int(self, v: Value) -> int:
        if isinstance(v, int):
            return v
        return int_value(self.problem, v)

    def _arith(self, op: str, a: Value, b: Value) -> int:
        x, y = self._to_int(a), self._to_int(b)
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        assert op == "*"
        return x * y

    def _int_like(self, v: Value) -> bool:
        return isinstance(v, int) or isinstance(
            self.problem.sort(v[0]).kind, IntRangeSort)

    def _eq(self, a: Value, b: Value) -> BExpr:
        if self._int_like(a) and self._int_like(b):
            return TRUE if self._to_int(a) == self._to_int(b) else FALSE
        return TRUE if a == b else FALSE

    def _cmp(self, op: str, a: Value, b: Value) -> BExpr:
        x, y = self._to_int(a), self._to_int(b)
        result = {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]
        return TRUE if result else FALSE


# ---------------------------------------------------------------------------
# Optional symmetry breaking (changes model counts; off by default)


def _break_symmetries(problem: Problem, shell: Interpretation,
                      atoms: AtomMap, cnf: CnfInstance) -> None:
    """Least-index ordering over each open sort: taking the cells that produce
    values of the sort in declaration order, a cell may use element index j>0
    only if an earlier cell used index j-1."""
    for decl in problem.sorts:
        if not isinstance(decl.kind, OpenSort):
            continue
        sort = decl.name
        cells: list[list[int]] = []   # per cell: var for each value index
        for n in problem.vocab.names:
            if n.sort == sort:
                cells.append([atoms.name_var(n.name, v) for v in shell.elements(sort)])
        for f in problem.vocab.functions:
            if f.result_sort == sort:
                for tup in arg_tuples(shell, f.arg_sorts):
                    cells.append([atoms.fun_var(f.name, tup, v)
                                  for v in shell.elements(sort)])
        if not cells:
            continue
        size = shell.domains[sort].size
        prov = Provenance("symmetry")
        for i, cell in enumerate(cells):
            for j in range(1, size):
                if j > i:
                    # element j cannot appear before j earlier cells exist
                    cnf.add((-cell[j],), prov)
                else:
                    earlier = [cells[i2][j - 1] for i2 in range(i)]
                    cnf.add((-cell[j],) + tuple(earlier), prov)


# ---------------------------------------------------------------------------
# Model decoding


def decode_model(problem: Problem, grounding: Grounding,
                 assignment: Sequence[bool]) -> Interpretation:
    """An Interpretation from a satisfying assignment of the grounded CNF."""
    atoms = grounding.atoms
    names: dict[str, Element] = {}
    functions: dict[str, dict[tuple[Element, ...], Element]] = {f.name: {} for f in problem.vocab.functions}
    predicates: dict[str, set] = {p.name: set() for p in problem.vocab.predicates}
    for var in atoms.atom_vars():
        if not assignment[var]:
            continue
        key = atoms.atom_of(var)
        if key[0] == "pred":
            predicates[key[1]].add(key[2])
        elif key[0] == "fun":
            table = functions[key[1]]
            assert key[2] not in table, "two values for one function cell"
            table[key[2]] = key[3]
        else:
            assert key[1] not in names, "two values for one name"
            names[key[1]] = key[2]
    for n in problem.vocab.names:
        assert n.name in names, "name left without a value"
    return Interpretation(
        grounding.domains, names,
        {f: dict(t) for f, t in functions.items()},
        {p: frozenset(s) for p, s in predicates.items()},
    )
