"""CNF instances with per-clause provenance, a polarity-aware definitional
transformation, and DIMACS import/export.

Literals are nonzero ints, positive for the variable, negative for its
negation.  Variables are numbered from 1.  Provenance records, for every
clause, either the index of the constraint it asserts or the axiom family it
belongs to; definitional (Tseitin) clauses are tagged "tseitin" and also
remember which constraint triggered the definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

Lit = int

_AXIOM_KINDS = ("totality", "functionality", "name-totality", "name-functionality",
                "tseitin", "cardinality", "symmetry", "external")


@dataclass(frozen=True)
class Provenance:
    kind: str                          # "constraint" or an axiom family
    constraint: Optional[int] = None   # constraint index; origin for "tseitin"
    symbol: Optional[str] = None       # function/name for axiom families
    cell: tuple[str, ...] = ()         # argument-tuple labels for function axioms

    def __post_init__(self):
        if self.kind == "constraint":
            if self.constraint is None:
                raise ValueError("constraint provenance needs an index")
        elif self.kind not in _AXIOM_KINDS:
            raise ValueError(f"unknown provenance kind {self.kind!r}")

    def axiom_tag(self) -> str:
        assert self.kind != "constraint"
        if self.kind in ("totality", "functionality"):
            return f"{self.kind}({self.symbol},{','.join(self.cell)})"
        if self.kind in ("name-totality", "name-functionality"):
            return f"{self.kind}({self.symbol})"
        return self.kind

    def describe(self) -> str:
        if self.kind == "constraint":
            return f"constraint {self.constraint}"
        return f"axiom {self.axiom_tag()}"


def constraint_prov(index: int) -> Provenance:
    return Provenance("constraint", constraint=index)


@dataclass
class CnfInstance:
    num_vars: int = 0
    clauses: list[tuple[Lit, ...]] = field(default_factory=list)
    provenance: list[Provenance] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, lits: Iterable[Lit], prov: Provenance) -> None:
        clause = tuple(lits)
        for l in clause:
            if l == 0 or abs(l) > self.num_vars:
                raise ValueError(f"literal {l} out of range")
        self.clauses.append(clause)
        self.provenance.append(prov)

    def copy(self) -> "CnfInstance":
        return CnfInstance(self.num_vars, list(self.clauses), list(self.provenance))


# ---------------------------------------------------------------------------
# Boolean expression layer over atoms, with constant folding


class BExpr:
    __slots__ = ()


class _BConst(BExpr):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = value

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = _BConst(True)
FALSE = _BConst(False)


class BAtom(BExpr):
    __slots__ = ("var",)

    def __init__(self, var: int):
        self.var = var


class BNot(BExpr):
    __slots__ = ("child",)

    def __init__(self, child: BExpr):
        self.child = child


class BAnd(BExpr):
    __slots__ = ("children",)

    def __init__(self, children: tuple[BExpr, ...]):
        self.children = children


class BOr(BExpr):
    __slots__ = ("children",)

    def __init__(self, children: tuple[BExpr, ...]):
        self.children = children


def batom(var: int) -> BExpr:
    return BAtom(var)


def bnot(e: BExpr) -> BExpr:
    if e is TRUE:
        return FALSE
    if e is FALSE:
        return TRUE
    if isinstance(e, BNot):
        return e.child
    return BNot(e)


def band(children: Iterable[BExpr]) -> BExpr:
    flat: list[BExpr] = []
    for c in children:
        if c is FALSE:
            return FALSE
        if c is TRUE:
            continue
        if isinstance(c, BAnd):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return BAnd(tuple(flat))


def bor(children: Iterable[BExpr]) -> BExpr:
    flat: list[BExpr] = []
    for c in children:
        if c is TRUE:
            return TRUE
        if c is FALSE:
            continue
        if isinstance(c, BOr):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return BOr(tuple(flat))


def bimplies(a: BExpr, b: BExpr) -> BExpr:
    return bor((bnot(a), b))


def biff(a: BExpr, b: BExpr) -> BExpr:
    return band((bor((bnot(a), b)), bor((bnot(b), a))))


# ---------------------------------------------------------------------------
# Polarity-aware definitional clausification


class Clausifier:
    """Adds asserted expressions to a CnfInstance, introducing auxiliary
    definition variables only for the polarities in which subexpressions occur."""

    def __init__(self, cnf: CnfInstance, on_aux: Optional[Callable[[int], None]] = None):
        self.cnf = cnf
        self.on_aux = on_aux
        self._vars: dict[int, int] = {}        # id(node) -> aux var
        self._done: dict[int, set[int]] = {}   # id(node) -> polarities emitted
        # the memo tables key by id(); asserted trees must stay alive for the
        # clausifier's lifetime or a recycled id would alias a dead subtree
        self._pinned: list[BExpr] = []

    def assert_expr(self, e: BExpr, prov: Provenance) -> None:
        if e is TRUE:
            return
        if e is FALSE:
            self.cnf.add((), prov)
            return
        self._pinned.append(e)
        tseitin = (Provenance("tseitin", constraint=prov.constraint)
                   if prov.kind == "constraint" else prov)
        conjuncts = e.children if isinstance(e, BAnd) else (e,)
        for c in conjuncts:
            clause = self._flat_clause(c)
            if clause is not None:
                self._emit(clause, prov)
            else:
                self._emit((self._literal(c, +1, tseitin),), prov)

    def _emit(self, clause: tuple[Lit, ...], prov: Provenance) -> None:
        if _tautology(clause):
            return
        self.cnf.add(clause, prov)

    def _flat_clause(self, e: BExpr) -> Optional[tuple[Lit, ...]]:
        lits = []
        parts = e.children if isinstance(e, BOr) else (e,)
        for p in parts:
            if isinstance(p, BAtom):
                lits.append(p.var)
            elif isinstance(p, BNot) and isinstance(p.child, BAtom):
                lits.append(-p.child.var)
            else:
                return None
        return tuple(lits)

    def _literal(self, e: BExpr, polarity: int, prov: Provenance) -> Lit:
        if isinstance(e, BAtom):
            return e.var
        if isinstance(e, BNot):
            return -self._literal(e.child, -polarity, prov)
        assert isinstance(e, (BAnd, BOr))
        key = id(e)
        v = self._vars.get(key)
        if v is None:
            v = self.cnf.new_var()
            self._vars[key] = v
            self._done[key] = set()
            if self.on_aux:
                self.on_aux(v)
        if polarity not in self._done[key]:
            self._done[key].add(polarity)
            kids = [self._literal(c, polarity, prov) for c in e.children]
            if isinstance(e, BAnd):
                if polarity > 0:   # v -> each child
                    for l in kids:
                        self._emit((-v, l), prov)
                else:              # children -> v
                    self._emit(tuple(-l for l in kids) + (v,), prov)
            else:
                if polarity > 0:   # v -> some child
                    self._emit((-v,) + tuple(kids), prov)
                else:              # each child -> v
                    for l in kids:
                        self._emit((-l, v), prov)
        return v


def _tautology(clause: tuple[Lit, ...]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


# ---------------------------------------------------------------------------
# DIMACS


def write_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for i, (clause, prov) in enumerate(zip(cnf.clauses, cnf.provenance), start=1):
        if prov.kind == "constraint":
            lines.append(f"c clause {i} from constraint {prov.constraint}")
        else:
            lines.append(f"c clause {i} axiom {prov.axiom_tag()}")
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> CnfInstance:
    num_vars = 0
    clauses: list[tuple[Lit, ...]] = []
    provs: dict[int, Provenance] = {}
    pending: list[Lit] = []
    header_seen = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            prov = _parse_prov_comment(line)
            if prov is not None:
                provs[prov[0]] = prov[1]
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed problem line: {line!r}")
            num_vars = int(parts[2])
            header_seen = True
            continue
        if not header_seen:
            raise ValueError("clause data before the problem line")
        for tok in line.split():
            l = int(tok)
            if l == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(l)
    if pending:
        clauses.append(tuple(pending))
    cnf = CnfInstance(num_vars=num_vars)
    for i, clause in enumerate(clauses, start=1):
        for l in clause:
            if abs(l) > cnf.num_vars:
                cnf.num_vars = abs(l)
        cnf.clauses.append(clause)
        cnf.provenance.append(provs.get(i, Provenance("external")))
    return cnf


def _parse_prov_comment(line: str) -> Optional[tuple[int, Provenance]]:
    parts = line.split(maxsplit=4)
    # "c clause <i> from constraint <k>" / "c clause <i> axiom <tag>"
    if len(parts) >= 4 and parts[1] == "clause":
        try:
            idx = int(parts[2])
        except ValueError:
            return None
        if parts[3] == "from" and len(parts) == 5:
            sub = parts[4].split()
            if len(sub) == 2 and sub[0] == "constraint":
                return idx, constraint_prov(int(sub[1]))
        if parts[3] == "axiom" and len(parts) == 5:
            return idx, _parse_axiom_tag(parts[4].strip())
    return None


def _parse_axiom_tag(tag: str) -> Provenance:
    if "(" in tag and tag.endswith(")"):
        kind, inner = tag[:-1].split("(", 1)
        bits = inner.split(",")
        if kind in ("totality", "functionality"):
            return Provenance(kind, symbol=bits[0], cell=tuple(bits[1:]))
        if kind in ("name-totality", "name-functionality"):
            return Provenance(kind, symbol=bits[0])
    if tag in _AXIOM_KINDS:
        return Provenance(tag)
    return Provenance("external")
