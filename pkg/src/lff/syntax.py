"""Abstract syntax for the modelling language: sorts, vocabulary, terms, formulas.

Identifiers are case-sensitive throughout.  Formula and term nodes are frozen
dataclasses, so structural equality and hashing come for free and values can be
shared safely between concurrent solver runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

# ---------------------------------------------------------------------------
# Sorts and vocabulary


@dataclass(frozen=True)
class OpenSort:
    """Sort whose cardinality is chosen by the size search."""


@dataclass(frozen=True)
class EnumSort:
    elements: tuple[str, ...]


@dataclass(frozen=True)
class IntRangeSort:
    lo: int
    hi: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1


SortKind = Union[OpenSort, EnumSort, IntRangeSort]


@dataclass(frozen=True)
class SortDecl:
    name: str
    kind: SortKind


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    arg_sorts: tuple[str, ...]


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str


@dataclass(frozen=True)
class NameDecl:
    name: str
    sort: str


@dataclass(frozen=True)
class Vocabulary:
    predicates: tuple[PredicateDecl, ...] = ()
    functions: tuple[FunctionDecl, ...] = ()
    names: tuple[NameDecl, ...] = ()

    def predicate(self, name: str) -> Optional[PredicateDecl]:
        return next((p for p in self.predicates if p.name == name), None)

    def function(self, name: str) -> Optional[FunctionDecl]:
        return next((f for f in self.functions if f.name == name), None)

    def name_decl(self, name: str) -> Optional[NameDecl]:
        return next((n for n in self.names if n.name == name), None)


# ---------------------------------------------------------------------------
# Terms and formulas
#
# Application arguments are parsed at the formula level so that the type
# checker (not the parser) can report a formula used where a term is expected;
# hence `args` tuples may transiently hold Formula nodes.


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NameRef:
    name: str


@dataclass(frozen=True)
class EnumLit:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class FunApp:
    name: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class IntArith:
    op: str  # one of + - *
    left: "Expr"
    right: "Expr"


Term = Union[Var, NameRef, EnumLit, IntLit, FunApp, IntArith]


@dataclass(frozen=True)
class PredApp:
    name: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class IntCmp:
    op: str  # one of < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    body: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Iff:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Optional[str]  # explicit annotation, rendered back out
    body: "Expr"
    # resolved by the type checker; not part of structural identity
    inferred_sort: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Optional[str]
    body: "Expr"
    inferred_sort: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class FalseConst:
    pass


Formula = Union[
    PredApp, Eq, Neq, IntCmp, Not, And, Or, Implies, Iff, Forall, Exists,
    TrueConst, FalseConst,
]

Expr = Union[Term, Formula]

QUANTIFIERS = (Forall, Exists)


# ---------------------------------------------------------------------------
# Problems


@dataclass(frozen=True)
class Span:
    """Half-open character range into the submitted problem text."""

    start: int
    end: int
    line: int  # 1-based line of the first character
    col: int   # 1-based column of the first character

    def slice(self, text: str) -> str:
        return text[self.start:self.end]


@dataclass(frozen=True)
class Constraint:
    formula: Expr
    span: Span
    index: int


@dataclass(frozen=True)
class Problem:
    sorts: tuple[SortDecl, ...]
    vocab: Vocabulary
    constraints: tuple[Constraint, ...]
    source: str = field(default="", compare=False)

    def sort(self, name: str) -> Optional[SortDecl]:
        return next((s for s in self.sorts if s.name == name), None)

    def open_sorts(self) -> tuple[SortDecl, ...]:
        return tuple(s for s in self.sorts if isinstance(s.kind, OpenSort))

    def enum_element_sort(self, element: str) -> Optional[str]:
        for s in self.sorts:
            if isinstance(s.kind, EnumSort) and element in s.kind.elements:
                return s.name
        return None


# ---------------------------------------------------------------------------
# Rendering
#
# Canonical ASCII connectives: ~ & | -> <-> = /= < <= > >= ALL SOME.
# Precedence, loosest to tightest: <-> , -> (right-assoc), |, &, then unary
# (~ and quantifiers), then comparisons/atoms.  Parenthesisation is minimal:
# re-parsing the output yields a structurally identical node.

_LVL_IFF = 0
_LVL_IMPLIES = 1
_LVL_OR = 2
_LVL_AND = 3
_LVL_UNARY = 4

_ARITH_LVL = {"+": 0, "-": 0, "*": 1}


def render_formula(f: Expr) -> str:
    """Deterministic canonical rendering of a formula (or term)."""
    return _render(f, 0)


def _render(f: Expr, level: int) -> str:
    if isinstance(f, Iff):
        s = f"{_render(f.left, _LVL_IFF + 1)} <-> {_render(f.right, _LVL_IFF)}"
        return _wrap(s, level > _LVL_IFF)
    if isinstance(f, Implies):
        s = f"{_render(f.left, _LVL_IMPLIES + 1)} -> {_render(f.right, _LVL_IMPLIES)}"
        return _wrap(s, level > _LVL_IMPLIES)
    if isinstance(f, Or):
        s = f"{_render(f.left, _LVL_OR)} | {_render(f.right, _LVL_OR + 1)}"
        return _wrap(s, level > _LVL_OR)
    if isinstance(f, And):
        s = f"{_render(f.left, _LVL_AND)} & {_render(f.right, _LVL_AND + 1)}"
        return _wrap(s, level > _LVL_AND)
    if isinstance(f, Not):
        return f"~{_render(f.body, _LVL_UNARY)}"
    if isinstance(f, (Forall, Exists)):
        kw = "ALL" if isinstance(f, Forall) else "SOME"
        ann = f": {f.sort}" if f.sort is not None else ""
        return f"{kw} {f.var}{ann} {_render(f.body, _LVL_UNARY)}"
    if isinstance(f, Eq):
        return _wrap(f"{_render_term(f.left)} = {_render_term(f.right)}", level > _LVL_UNARY)
    if isinstance(f, Neq):
        return _wrap(f"{_render_term(f.left)} /= {_render_term(f.right)}", level > _LVL_UNARY)
    if isinstance(f, IntCmp):
        return _wrap(f"{_render_term(f.left)} {f.op} {_render_term(f.right)}", level > _LVL_UNARY)
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, PredApp):
        return f.name + _render_args(f.args)
    return _render_term(f)


def _render_term(t: Expr, arith_level: int = 0) -> str:
    if isinstance(t, (Var, NameRef, EnumLit)):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, FunApp):
        return t.name + _render_args(t.args)
    if isinstance(t, IntArith):
        lvl = _ARITH_LVL[t.op]
        s = f"{_render_term(t.left, lvl)} {t.op} {_render_term(t.right, lvl + 1)}"
        return _wrap(s, arith_level > lvl)
    # a formula in term position (ill-typed, but diagnostics render it)
    return _wrap(_render(t, 0), not isinstance(t, (PredApp, TrueConst, FalseConst)))


def _render_args(args: tuple[Expr, ...]) -> str:
    return "(" + ",".join(_render(a, 0) for a in args) + ")"


def _wrap(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


# ---------------------------------------------------------------------------
# Variable accounting


def free_variables(f: Expr) -> set[str]:
    """Variable identifiers with at least one occurrence not bound by a quantifier."""
    out: set[str] = set()
    _collect_free(f, frozenset(), out)
    return out


def _collect_free(f: Expr, bound: frozenset[str], out: set[str]) -> None:
    if isinstance(f, Var):
        if f.name not in bound:
            out.add(f.name)
    elif isinstance(f, (Forall, Exists)):
        _collect_free(f.body, bound | {f.var}, out)
    else:
        for child in _children(f):
            _collect_free(child, bound, out)


def _children(f: Expr) -> Iterator[Expr]:
    if isinstance(f, (PredApp, FunApp)):
        yield from f.args
    elif isinstance(f, (Eq, Neq, IntCmp, And, Or, Implies, Iff, IntArith)):
        yield f.left
        yield f.right
    elif isinstance(f, Not):
        yield f.body
    elif isinstance(f, (Forall, Exists)):
        yield f.body


def walk(f: Expr) -> Iterator[Expr]:
    """Pre-order traversal of a formula/term tree."""
    yield f
    for child in _children(f):
        yield from walk(child)


def is_term(e: Expr) -> bool:
    return isinstance(e, (Var, NameRef, EnumLit, IntLit, FunApp, IntArith))
