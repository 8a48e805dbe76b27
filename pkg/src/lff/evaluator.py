"""Tarskian model checker and brute-force model enumerator.

This module is the oracle the grounding/SAT pipeline is validated against, so
it deliberately shares no traversal code with the grounder: evaluation is a
direct structural recursion over the syntax tree.

Partiality: a term can fail to denote (an integer expression outside the range
of the argument position it feeds).  Any atom containing a non-denoting term
evaluates to false; `/=` is treated as the negation of `=` throughout.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Optional, Union

from .interpretation import Interpretation, Element, arg_tuples, make_domains
from .syntax import (
    And, EnumLit, Eq, Exists, Expr, FalseConst, Forall, FunApp, Iff, Implies,
    IntArith, IntCmp, IntLit, NameRef, Neq, Not, Or, PredApp, TrueConst, Var,
)
from .typecheck import TypedProblem

Value = Union[Element, int, None]  # int: generic integer; None: fails to denote


class SpaceTooLarge(Exception):
    def __init__(self, size: int, guard: int):
        super().__init__(f"interpretation space of size {size} exceeds the guard {guard}")
        self.size = size
        self.guard = guard


def evaluate(interp: Interpretation, f: Expr, env: Optional[Mapping[str, Element]] = None) -> bool:
    """Truth of a (typed) formula under the interpretation and environment."""
    env = dict(env or {})
    enum_elements = _enum_element_map(interp)

    def term(t: Expr) -> Value:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, NameRef):
            return interp.names[t.name]
        if isinstance(t, EnumLit):
            return enum_elements[t.name]
        if isinstance(t, IntLit):
            return t.value
        if isinstance(t, IntArith):
            l, r = as_int(term(t.left)), as_int(term(t.right))
            if l is None or r is None:
                return None
            return l + r if t.op == "+" else l - r if t.op == "-" else l * r
        if isinstance(t, FunApp):
            table = interp.functions[t.name]
            key = app_key(t.args, next(iter(table)))
            return None if key is None else table[key]
        raise TypeError(f"formula in term position: {t!r}")

    def as_int(v: Value) -> Optional[int]:
        # elements of integer-range sorts are labelled by their values
        if isinstance(v, tuple):
            return int(interp.label(v))
        return v

    def app_key(args: tuple[Expr, ...], shape: tuple[Element, ...]) -> Optional[tuple[Element, ...]]:
        # a generic integer argument is matched against the sort the
        # declaration assigns that position, read off any existing tuple
        key = []
        for i, a in enumerate(args):
            v = term(a)
            if v is None:
                return None
            if isinstance(v, int):
                v = _int_element(interp, shape[i][0], v)
                if v is None:
                    return None
            key.append(v)
        return tuple(key)

    def truth(e: Expr) -> bool:
        if isinstance(e, TrueConst):
            return True
        if isinstance(e, FalseConst):
            return False
        if isinstance(e, PredApp):
            ext = interp.predicates[e.name]
            if not ext:
                return False
            key = app_key(e.args, next(iter(ext)))
            return key is not None and key in ext
        if isinstance(e, Eq):
            l, r = term(e.left), term(e.right)
            if l is None or r is None:
                return False
            if isinstance(l, int) or isinstance(r, int):
                li, ri = as_int(l), as_int(r)
                return li == ri
            return l == r
        if isinstance(e, Neq):
            return not truth(Eq(e.left, e.right))
        if isinstance(e, IntCmp):
            l, r = as_int(term(e.left)), as_int(term(e.right))
            if l is None or r is None:
                return False
            return {"<": l < r, "<=": l <= r, ">": l > r, ">=": l >= r}[e.op]
        if isinstance(e, Not):
            return not truth(e.body)
        if isinstance(e, And):
            return truth(e.left) and truth(e.right)
        if isinstance(e, Or):
            return truth(e.left) or truth(e.right)
        if isinstance(e, Implies):
            return (not truth(e.left)) or truth(e.right)
        if isinstance(e, Iff):
            return truth(e.left) == truth(e.right)
        if isinstance(e, (Forall, Exists)):
            sort = e.inferred_sort or e.sort
            if sort is None:
                raise ValueError(f"binder {e.var} has no sort; typecheck first")
            elements = interp.elements(sort)
            saved = env.get(e.var)
            shadow = e.var in env
            result = isinstance(e, Forall)
            for el in elements:
                env[e.var] = el
                if truth(e.body) != result:
                    result = not result
                    break
            if shadow:
                env[e.var] = saved
            else:
                env.pop(e.var, None)
            return result
        raise TypeError(f"term in formula position: {e!r}")

    return truth(f)


def _enum_element_map(interp: Interpretation) -> dict[str, Element]:
    # enum labels are globally unique identifiers; numeric and open-sort
    # labels can never collide with them
    out: dict[str, Element] = {}
    for sort, dom in interp.domains.items():
        for i, label in enumerate(dom.labels):
            if not label[0].isdigit() and "@" not in label:
                out[label] = (sort, i)
    return out


def _int_element(interp: Interpretation, sort: str, value: int) -> Optional[Element]:
    labels = interp.domains[sort].labels
    lo = int(labels[0])
    idx = value - lo
    if 0 <= idx < len(labels):
        return (sort, idx)
    return None


def check_constraints(interp: Interpretation, tp: TypedProblem) -> list[bool]:
    return [evaluate(interp, c.formula, {}) for c in tp.problem.constraints]


def brute_force_models(tp: TypedProblem, open_sizes: Mapping[str, int],
                       cap: Optional[int] = None,
                       guard: int = 10_000_000) -> list[Interpretation]:
    """Exhaustively enumerate satisfying interpretations at fixed domain sizes.

    Candidate order is deterministic: name valuations vary slowest, predicate
    extensions fastest, each in declaration order.
    """
    problem = tp.problem
    vocab = problem.vocab
    domains = make_domains(problem, open_sizes)
    shell = Interpretation(domains, {}, {}, {})

    name_slots = [(n.name, shell.elements(n.sort)) for n in vocab.names]
    func_slots = [(f.name, list(arg_tuples(shell, f.arg_sorts)), shell.elements(f.result_sort))
                  for f in vocab.functions]
    pred_slots = [(p.name, list(arg_tuples(shell, p.arg_sorts))) for p in vocab.predicates]

    space = 1
    for _, elements in name_slots:
        space *= len(elements)
    for _, cells, results in func_slots:
        space *= len(results) ** len(cells)
    for _, cells in pred_slots:
        space *= 2 ** len(cells)
    if space > guard:
        raise SpaceTooLarge(space, guard)

    models: list[Interpretation] = []
    name_iter = itertools.product(*(elements for _, elements in name_slots))
    for name_choice in name_iter:
        names = {n: e for (n, _), e in zip(name_slots, name_choice)}
        func_iter = itertools.product(
            *(itertools.product(results, repeat=len(cells)) for _, cells, results in func_slots))
        for func_choice in func_iter:
            functions = {
                f: dict(zip(cells, values))
                for (f, cells, _), values in zip(func_slots, func_choice)
            }
            pred_iter = itertools.product(
                *(itertools.product((False, True), repeat=len(cells)) for _, cells in pred_slots))
            for pred_choice in pred_iter:
                predicates = {
                    p: frozenset(c for c, on in zip(cells, flags) if on)
                    for (p, cells), flags in zip(pred_slots, pred_choice)
                }
                interp = Interpretation(domains, names, functions, predicates)
                if all(check_constraints(interp, tp)):
                    models.append(interp)
                    if cap is not None and len(models) >= cap:
                        return models
    return models
