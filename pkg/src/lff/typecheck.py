"""Sort inference for quantified variables and many-sorted type verification.

Variables carry no declared sort; each binder's sort is inferred by
intersecting the constraints induced by every occurrence (argument positions,
equalities, integer operators), with an explicit annotation overriding and
then being verified.  Formulae have type bool; terms have a sort, or the
generic integer type for literals and arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .diagnostics import Diagnostic, error, has_errors, warning
from .parser import expr_to_tree, render_parse_tree
from .syntax import (
    And, Constraint, EnumLit, Eq, Exists, Expr, FalseConst, Forall,
    FunApp, Iff, Implies, IntArith, IntCmp, IntLit, IntRangeSort, NameRef,
    Neq, Not, Or, PredApp, Problem, Span, TrueConst, Var, render_formula,
)

INT = "<int>"   # generic integer: literals and arithmetic results
BOOL = "<bool>"

_HINTS = ("misplaced parentheses and wrong names",)


@dataclass(frozen=True)
class TypedProblem:
    problem: Problem
    binder_sorts: Mapping[int, str]  # id(quantifier node) -> sort
    term_types: Mapping[int, str]    # id(expr node) -> sort | INT | BOOL
    warnings: tuple[Diagnostic, ...]


def display_type(t: str) -> str:
    return {INT: "int", BOOL: "bool"}.get(t, t)


def check(problem: Problem) -> Union[TypedProblem, list[Diagnostic]]:
    c = _Checker(problem)
    c.run()
    if has_errors(c.diags):
        return c.diags
    return TypedProblem(problem, c.binder_sorts, c.term_types,
                        tuple(d for d in c.diags if d.severity == "warning"))


_DUMMY_SPAN = Span(0, 0, 1, 1)


def infer_variable_sorts(var: str, body: Expr, problem: Problem,
                         annotation: Optional[str] = None) -> Union[str, Diagnostic]:
    """Infer the sort of one binder over the given body; other variables in the
    body are ignored rather than reported."""
    node = Exists(var, annotation, body)
    c = _Checker(problem)
    binder_map = c.infer(Constraint(node, _DUMMY_SPAN, 0))
    if binder_map is not None and id(node) in binder_map:
        return binder_map[id(node)]
    for d in c.diags:
        if d.severity == "error":
            return d
    return error(1, 1, render_formula(node), f"Cannot infer a sort for variable {var}")


class _Checker:
    def __init__(self, problem: Problem):
        self.problem = problem
        self.vocab = problem.vocab
        self.diags: list[Diagnostic] = []
        self.binder_sorts: dict[int, str] = {}
        self.term_types: dict[int, str] = {}
        self.all_sorts = {s.name for s in problem.sorts}
        self.int_sorts = {s.name for s in problem.sorts if isinstance(s.kind, IntRangeSort)}
        # usage tracking for warnings
        self.used_symbols: set[str] = set()
        self.used_sorts: set[str] = set()

    # -- entry -------------------------------------------------------------

    def run(self) -> None:
        for c in self.problem.constraints:
            self.check_constraint(c)
        self.warn_unused()

    def check_constraint(self, c: Constraint) -> None:
        if not self.structure(c, c.formula, set()):
            return
        binder_map = self.infer(c)
        if binder_map is None:
            return
        t = self.types(c, c.formula, {}, binder_map)
        if t != BOOL:
            self.term_as_formula(c, c.formula, c.formula, t,
                                 "the constraint itself must be a formula")

    # -- diagnostics -------------------------------------------------------

    def _where(self, c: Constraint) -> tuple[int, int, str]:
        src = self.problem.source
        if src and c.span.end > 0:
            start = src.rfind("\n", 0, c.span.start) + 1
            end = src.find("\n", c.span.start)
            line_text = src[start:] if end < 0 else src[start:end]
            return c.span.line, c.span.col, line_text
        return c.span.line, c.span.col, render_formula(c.formula) + "."

    def emit(self, c: Constraint, message: str, detail: tuple[str, ...],
             hints: tuple[str, ...] = _HINTS) -> None:
        line, col, offending = self._where(c)
        tree = render_parse_tree(expr_to_tree(c.formula))
        self.diags.append(error(line, col, offending, message,
                                detail=detail, partial_tree=tree, hints=hints))

    def arg_mismatch(self, c: Constraint, app: Expr, op: str, pos: int,
                     expected: str, arg: Expr, actual: str) -> None:
        # the paper's golden block shape; pos is 1-based
        self.emit(c, f"Type mismatch with argument of {op}", (
            "Detailed diagnostics: in the formula",
            "  " + render_formula(app),
            f'the main operator "{op}" expects argument {pos} to be of type {expected}',
            f"but argument {pos} is",
            "  " + render_formula(arg),
            f"which is of type {display_type(actual)}.",
        ))

    def term_as_formula(self, c: Constraint, context: Expr, term: Expr,
                        t: str, requirement: str) -> None:
        self.emit(c, "Term used as a formula", (
            "Detailed diagnostics: in the formula",
            "  " + render_formula(context),
            f'the term "{render_formula(term)}" is of type {display_type(t)}',
            f"where a formula of type bool is required ({requirement}).",
        ))

    # -- pass 1: structural resolution -------------------------------------

    def structure(self, c: Constraint, e: Expr, bound: set[str]) -> bool:
        ok = True
        if isinstance(e, (Forall, Exists)):
            if e.sort is not None:
                self.used_sorts.add(e.sort)
                if e.sort not in self.all_sorts:
                    self.emit(c, f"Unknown sort {e.sort}", (
                        "Detailed diagnostics: in the formula",
                        "  " + render_formula(e),
                        f'the annotation names "{e.sort}", which is not a declared sort.',
                    ))
                    ok = False
            return self.structure(c, e.body, bound | {e.var}) and ok
        if isinstance(e, (PredApp, FunApp)):
            decl = (self.vocab.predicate(e.name) if isinstance(e, PredApp)
                    else self.vocab.function(e.name))
            if decl is None:
                ok = False
                self.emit(c, f"Undeclared symbol {e.name}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(e),
                    f'the symbol "{e.name}" {self._describe_misapplied(e.name)}.',
                ))
            else:
                self.used_symbols.add(e.name)
                if len(e.args) != len(decl.arg_sorts):
                    ok = False
                    n, m = len(decl.arg_sorts), len(e.args)
                    self.emit(c, f"Wrong number of arguments to {e.name}", (
                        "Detailed diagnostics: in the formula",
                        "  " + render_formula(e),
                        f'the operator "{e.name}" expects {n} argument{"s" if n != 1 else ""} '
                        f'but received {m}.',
                    ))
            for a in e.args:
                ok = self.structure(c, a, bound) and ok
            return ok
        if isinstance(e, Var):
            if e.name not in bound:
                ok = False
                kind = ("is a predicate and must be applied to arguments"
                        if self.vocab.predicate(e.name) else
                        "is a function and must be applied to arguments"
                        if self.vocab.function(e.name) else
                        "is not a declared name, an enum element, or a bound variable")
                self.emit(c, f"Unknown identifier {e.name}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(c.formula),
                    f'the identifier "{e.name}" {kind}.',
                ))
            return ok
        if isinstance(e, NameRef):
            self.used_symbols.add(e.name)
            return True
        if isinstance(e, EnumLit):
            sort = self.problem.enum_element_sort(e.name)
            if sort:
                self.used_sorts.add(sort)
            return True
        for child in _children(e):
            ok = self.structure(c, child, bound) and ok
        return ok

    def _describe_misapplied(self, name: str) -> str:
        if self.vocab.name_decl(name):
            return "is declared as a name, which takes no arguments"
        if self.problem.enum_element_sort(name):
            return "is an enum element, which takes no arguments"
        return "is not declared as a predicate or function"

    # -- pass 2: binder sort inference --------------------------------------

    def infer(self, c: Constraint) -> Optional[dict[int, str]]:
        binders: dict[int, _Binder] = {}
        self._collect(c.formula, {}, binders)
        failed = False
        # per-binder requirements
        for b in binders.values():
            held: Optional[str] = b.annotation if b.annotation in self.all_sorts else None
            admissible = {held} if held else set(self.all_sorts)
            described = held  # how the current admissible set was pinned down
            for kind, payload in b.reqs:
                narrowed = admissible & ({payload} if kind == "exact" else self.int_sorts)
                if not narrowed:
                    want = payload if kind == "exact" else "an integer-ranged sort"
                    prev = described or self._describe_set(admissible, b)
                    self.emit(c, f"Cannot infer a sort for variable {b.var}", (
                        "Detailed diagnostics: in the formula",
                        "  " + render_formula(b.node),
                        f'occurrences of "{b.var}" require conflicting sorts:',
                        f"conflict: {prev} vs {want}.",
                    ))
                    b.failed = failed = True
                    break
                admissible = narrowed
                if len(admissible) == 1:
                    described = next(iter(admissible))
            b.admissible = admissible
        # propagate equality links to a fixpoint
        changed = True
        while changed:
            changed = False
            for b in binders.values():
                if b.failed:
                    continue
                for other_key in b.links:
                    o = binders[other_key]
                    if o.failed:
                        continue
                    inter = b.admissible & o.admissible
                    if not inter:
                        self.emit(c, f"Cannot infer a sort for variable {b.var}", (
                            "Detailed diagnostics: in the formula",
                            "  " + render_formula(b.node),
                            f'"{b.var}" and "{o.var}" are equated but admit no common sort:',
                            f"conflict: {self._describe_set(b.admissible, b)} vs "
                            f"{self._describe_set(o.admissible, o)}.",
                        ))
                        b.failed = o.failed = failed = True
                        break
                    if inter != b.admissible or inter != o.admissible:
                        b.admissible = o.admissible = inter
                        changed = True
        # a binder nothing constrains cannot be defaulted
        constrained = {k for k, b in binders.items() if b.reqs or b.annotation}
        grew = True
        while grew:
            grew = False
            for k, b in binders.items():
                if k not in constrained and any(o in constrained for o in b.links):
                    constrained.add(k)
                    grew = True
        out: dict[int, str] = {}
        for k, b in binders.items():
            if b.failed:
                continue
            if k not in constrained:
                self.emit(c, f"Cannot infer a sort for variable {b.var}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(b.node),
                    f'no occurrence of "{b.var}" determines its sort; '
                    f'annotate the binder, e.g. "SOME {b.var}: <sort> ...".',
                ))
                failed = True
            elif len(b.admissible) == 1:
                sort = next(iter(b.admissible))
                out[k] = sort
                self.used_sorts.add(sort)
                object.__setattr__(b.node, "inferred_sort", sort)
            else:
                names = ", ".join(sorted(b.admissible))
                self.emit(c, f"Cannot infer a sort for variable {b.var}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(b.node),
                    f'occurrences of "{b.var}" admit more than one sort ({names}); '
                    f'annotate the binder.',
                ))
                failed = True
        if failed:
            return None
        self.binder_sorts.update(out)
        return out

    def _describe_set(self, admissible: set[str], b: "_Binder") -> str:
        if len(admissible) == 1:
            return next(iter(admissible))
        if any(kind == "int" for kind, _ in b.reqs):
            return "an integer-ranged sort"
        return "{" + ", ".join(sorted(admissible)) + "}"

    def _collect(self, e: Expr, scope: dict[str, int],
                 binders: dict[int, "_Binder"]) -> None:
        if isinstance(e, (Forall, Exists)):
            b = _Binder(id(e), e, e.var, e.sort)
            binders[id(e)] = b
            self._collect(e.body, {**scope, e.var: id(e)}, binders)
            return
        if isinstance(e, (PredApp, FunApp)):
            decl = (self.vocab.predicate(e.name) if isinstance(e, PredApp)
                    else self.vocab.function(e.name))
            if decl is not None:
                for i, a in enumerate(e.args):
                    if isinstance(a, Var) and a.name in scope and i < len(decl.arg_sorts):
                        binders[scope[a.name]].reqs.append(("exact", decl.arg_sorts[i]))
            for a in e.args:
                self._collect(a, scope, binders)
            return
        if isinstance(e, (Eq, Neq)):
            l_var = isinstance(e.left, Var) and e.left.name in scope
            r_var = isinstance(e.right, Var) and e.right.name in scope
            if l_var and r_var:
                a, b = scope[e.left.name], scope[e.right.name]
                binders[a].links.add(b)
                binders[b].links.add(a)
            elif l_var or r_var:
                key = scope[e.left.name if l_var else e.right.name]
                other = e.right if l_var else e.left
                sort = self._shallow_sort(other)
                if sort == INT:
                    binders[key].reqs.append(("int", ""))
                elif sort is not None:
                    binders[key].reqs.append(("exact", sort))
        if isinstance(e, (IntCmp, IntArith)):
            for side in (e.left, e.right):
                if isinstance(side, Var) and side.name in scope:
                    binders[scope[side.name]].reqs.append(("int", ""))
        for child in _children(e):
            self._collect(child, scope, binders)

    def _shallow_sort(self, e: Expr) -> Optional[str]:
        # the sort a non-variable term is known to have from declarations alone
        if isinstance(e, NameRef):
            d = self.vocab.name_decl(e.name)
            return d.sort if d else None
        if isinstance(e, EnumLit):
            return self.problem.enum_element_sort(e.name)
        if isinstance(e, FunApp):
            d = self.vocab.function(e.name)
            return d.result_sort if d else None
        if isinstance(e, (IntLit, IntArith)):
            return INT
        return None

    # -- pass 3: type verification ------------------------------------------

    def types(self, c: Constraint, e: Expr, env: dict[str, str],
              binder_map: dict[int, str]) -> str:
        t = self._types(c, e, env, binder_map)
        self.term_types[id(e)] = t
        return t

    def _types(self, c: Constraint, e: Expr, env: dict[str, str],
               binder_map: dict[int, str]) -> str:
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, NameRef):
            return self.vocab.name_decl(e.name).sort
        if isinstance(e, EnumLit):
            return self.problem.enum_element_sort(e.name)
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, IntArith):
            for pos, side in ((1, e.left), (2, e.right)):
                t = self.types(c, side, env, binder_map)
                if not self._int_like(t):
                    self.arg_mismatch(c, e, e.op, pos, "int", side, t)
            return INT
        if isinstance(e, (PredApp, FunApp)):
            decl = (self.vocab.predicate(e.name) if isinstance(e, PredApp)
                    else self.vocab.function(e.name))
            for i, arg in enumerate(e.args):
                t = self.types(c, arg, env, binder_map)
                expected = decl.arg_sorts[i]
                if not self._fits(t, expected):
                    self.arg_mismatch(c, e, e.name, i + 1, expected, arg, t)
            return BOOL if isinstance(e, PredApp) else decl.result_sort
        if isinstance(e, (Eq, Neq)):
            op = "=" if isinstance(e, Eq) else "/="
            lt = self.types(c, e.left, env, binder_map)
            rt = self.types(c, e.right, env, binder_map)
            if BOOL in (lt, rt):
                side = e.left if lt == BOOL else e.right
                pos = 1 if lt == BOOL else 2
                self.emit(c, f"Type mismatch with argument of {op}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(e),
                    f'the operator "{op}" relates two terms of the same sort',
                    f"but argument {pos} is",
                    "  " + render_formula(side),
                    "which is of type bool.",
                ), hints=_HINTS + ("use <-> to relate two formulas",))
            elif not self._eq_compatible(lt, rt):
                self.emit(c, f"Type mismatch in {op}", (
                    "Detailed diagnostics: in the formula",
                    "  " + render_formula(e),
                    f'the left side "{render_formula(e.left)}" is of type {display_type(lt)}',
                    f'but the right side "{render_formula(e.right)}" '
                    f"is of type {display_type(rt)}.",
                ))
            return BOOL
        if isinstance(e, IntCmp):
            for pos, side in ((1, e.left), (2, e.right)):
                t = self.types(c, side, env, binder_map)
                if not self._int_like(t):
                    self.arg_mismatch(c, e, e.op, pos, "int", side, t)
            return BOOL
        if isinstance(e, Not):
            t = self.types(c, e.body, env, binder_map)
            if t != BOOL:
                self.term_as_formula(c, e, e.body, t, 'the operand of "~"')
            return BOOL
        if isinstance(e, (And, Or, Implies, Iff)):
            op = {And: "&", Or: "|", Implies: "->", Iff: "<->"}[type(e)]
            for side in (e.left, e.right):
                t = self.types(c, side, env, binder_map)
                if t != BOOL:
                    self.term_as_formula(c, e, side, t, f'an operand of "{op}"')
            return BOOL
        if isinstance(e, (Forall, Exists)):
            sort = binder_map.get(id(e))
            t = self.types(c, e.body, {**env, e.var: sort}, binder_map)
            if t != BOOL:
                self.term_as_formula(c, e, e.body, t, "a quantifier body")
            return BOOL
        if isinstance(e, (TrueConst, FalseConst)):
            return BOOL
        raise TypeError(f"unexpected node {e!r}")

    def _int_like(self, t: str) -> bool:
        return t == INT or t in self.int_sorts

    def _fits(self, t: str, expected: str) -> bool:
        # a generic integer may feed an integer-ranged argument position;
        # out-of-range values simply fail to denote there
        return t == expected or (t == INT and expected in self.int_sorts)

    def _eq_compatible(self, lt: str, rt: str) -> bool:
        if lt == rt and lt != BOOL:
            return True
        return (lt == INT and self._int_like(rt)) or (rt == INT and self._int_like(lt))

    # -- warnings ------------------------------------------------------------

    def warn_unused(self) -> None:
        if not self.problem.constraints:
            self.diags.append(warning(1, 1, "Constraints:",
                                      "Problem has no constraints; every interpretation "
                                      "is a model"))
        for p in self.problem.vocab.predicates:
            if p.name not in self.used_symbols:
                self._warn_symbol("Predicate", p.name)
            else:
                self.used_sorts.update(p.arg_sorts)
        for f in self.problem.vocab.functions:
            if f.name not in self.used_symbols:
                self._warn_symbol("Function", f.name)
            else:
                self.used_sorts.update(f.arg_sorts)
                self.used_sorts.add(f.result_sort)
        for n in self.problem.vocab.names:
            if n.name not in self.used_symbols:
                self._warn_symbol("Name", n.name)
            else:
                self.used_sorts.add(n.sort)
        for s in self.problem.sorts:
            if s.name not in self.used_sorts:
                self._warn_symbol("Sort", s.name)

    def _warn_symbol(self, kind: str, name: str) -> None:
        self.diags.append(warning(1, 1, name, f"{kind} {name} is declared but never used"))


@dataclass
class _Binder:
    key: int
    node: Union[Forall, Exists]
    var: str
    annotation: Optional[str]
    failed: bool = False

    def __post_init__(self):
        self.reqs: list[tuple[str, str]] = []
        self.links: set[int] = set()
        self.admissible: set[str] = set()


def _children(e: Expr):
    if isinstance(e, (PredApp, FunApp)):
        return e.args
    if isinstance(e, (And, Or, Implies, Iff, Eq, Neq, IntCmp, IntArith)):
        return (e.left, e.right)
    if isinstance(e, (Not, Forall, Exists)):
        return (e.body,)
    return ()


def audit(tp: TypedProblem) -> list[str]:
    """Independent arity/sort re-verification of a checked problem.

    Deliberately re-derives every judgement from declarations and the binder
    annotations alone, sharing none of the checker's bookkeeping.
    """
    problem = tp.problem
    vocab = problem.vocab
    findings: list[str] = []
    int_sorts = {s.name for s in problem.sorts if isinstance(s.kind, IntRangeSort)}

    def sort_of(e: Expr, env: dict[str, str]) -> str:
        if isinstance(e, Var):
            return env.get(e.name, "?unbound")
        if isinstance(e, NameRef):
            d = vocab.name_decl(e.name)
            return d.sort if d else "?undeclared"
        if isinstance(e, EnumLit):
            return problem.enum_element_sort(e.name) or "?undeclared"
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, IntArith):
            for side in (e.left, e.right):
                s = sort_of(side, env)
                if s != INT and s not in int_sorts:
                    findings.append(f"arithmetic over non-integer operand {render_formula(side)}")
            return INT
        if isinstance(e, FunApp):
            d = vocab.function(e.name)
            if d is None:
                findings.append(f"undeclared function {e.name}")
                return "?undeclared"
            check_app(e.name, d.arg_sorts, e.args, env)
            return d.result_sort
        findings.append(f"formula in term position: {render_formula(e)}")
        return BOOL

    def check_app(name: str, expected: tuple[str, ...], args, env) -> None:
        if len(args) != len(expected):
            findings.append(f"arity mismatch at {name}")
            return
        for want, arg in zip(expected, args):
            got = sort_of(arg, env)
            if got != want and not (got == INT and want in int_sorts):
                findings.append(f"argument of {name}: wanted {want}, got {got}")

    def walk(f: Expr, env: dict[str, str]) -> None:
        if isinstance(f, PredApp):
            d = vocab.predicate(f.name)
            if d is None:
                findings.append(f"undeclared predicate {f.name}")
            else:
                check_app(f.name, d.arg_sorts, f.args, env)
        elif isinstance(f, (Eq, Neq)):
            lt, rt = sort_of(f.left, env), sort_of(f.right, env)
            both_int = {lt, rt} <= int_sorts | {INT}
            if lt != rt and not (both_int and INT in (lt, rt)):
                findings.append(f"equality across {lt} and {rt}")
        elif isinstance(f, IntCmp):
            for side in (f.left, f.right):
                s = sort_of(side, env)
                if s != INT and s not in int_sorts:
                    findings.append(f"comparison over non-integer {render_formula(side)}")
        elif isinstance(f, Not):
            walk(f.body, env)
        elif isinstance(f, (And, Or, Implies, Iff)):
            walk(f.left, env)
            walk(f.right, env)
        elif isinstance(f, (Forall, Exists)):
            sort = f.inferred_sort
            if sort is None:
                findings.append(f"binder {f.var} lacks an inferred sort")
                sort = "?missing"
            walk(f.body, {**env, f.var: sort})
        elif isinstance(f, (TrueConst, FalseConst)):
            pass
        else:
            findings.append(f"term at formula position: {render_formula(f)}")

    for c in problem.constraints:
        walk(c.formula, {})
    return findings
