"""Finite interpretations: sort domains, name values, function tables, predicate extensions.

Elements are sort-tagged pairs ``(sortName, index)`` so domains of distinct
sorts are disjoint by construction.  Open-sort elements are labelled
``sort@1 .. sort@n``, enum elements keep their declared labels, integer-range
elements are labelled by their numeric values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .syntax import EnumSort, IntRangeSort, OpenSort, Problem

Element = tuple[str, int]  # (sort name, 0-based index into the sort's domain)


@dataclass(frozen=True)
class SortDomain:
    size: int
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.size <= 0 or len(self.labels) != self.size:
            raise ValueError("label count must equal the (positive) domain size")


@dataclass(frozen=True)
class Interpretation:
    domains: Mapping[str, SortDomain]
    names: Mapping[str, Element]
    functions: Mapping[str, Mapping[tuple[Element, ...], Element]]
    predicates: Mapping[str, frozenset[tuple[Element, ...]]]

    def elements(self, sort: str) -> list[Element]:
        return [(sort, i) for i in range(self.domains[sort].size)]

    def label(self, e: Element) -> str:
        return self.domains[e[0]].labels[e[1]]

    def canonical(self):
        """Hashable normal form, for set-of-models comparisons in tests."""
        return (
            tuple(sorted((s, d.labels) for s, d in self.domains.items())),
            tuple(sorted(self.names.items())),
            tuple(sorted((f, tuple(sorted(table.items()))) for f, table in self.functions.items())),
            tuple(sorted((p, tuple(sorted(ext))) for p, ext in self.predicates.items())),
        )


def make_domains(problem: Problem, open_sizes: Mapping[str, int]) -> dict[str, SortDomain]:
    """Build per-sort domains; open_sizes fixes the cardinality of each open sort."""
    domains: dict[str, SortDomain] = {}
    for decl in problem.sorts:
        if isinstance(decl.kind, OpenSort):
            n = open_sizes[decl.name]
            domains[decl.name] = SortDomain(n, tuple(f"{decl.name}@{k}" for k in range(1, n + 1)))
        elif isinstance(decl.kind, EnumSort):
            domains[decl.name] = SortDomain(len(decl.kind.elements), decl.kind.elements)
        else:
            k = decl.kind
            domains[decl.name] = SortDomain(k.size, tuple(str(v) for v in range(k.lo, k.hi + 1)))
    return domains


def int_value(problem: Problem, e: Element) -> int:
    kind = problem.sort(e[0]).kind
    assert isinstance(kind, IntRangeSort)
    return kind.lo + e[1]


def element_for_int(problem: Problem, sort: str, value: int) -> Optional[Element]:
    """The element of an integer-range sort holding this value, if in range."""
    kind = problem.sort(sort).kind
    assert isinstance(kind, IntRangeSort)
    if kind.lo <= value <= kind.hi:
        return (sort, value - kind.lo)
    return None


def arg_tuples(interp: Interpretation, arg_sorts: tuple[str, ...]) -> Iterator[tuple[Element, ...]]:
    """All argument tuples over the given sorts, row-major in domain order."""
    if not arg_sorts:
        yield ()
        return
    head, rest = arg_sorts[0], arg_sorts[1:]
    for e in interp.elements(head):
        for tail in arg_tuples(interp, rest):
            yield (e,) + tail


def validate(problem: Problem, interp: Interpretation) -> list[str]:
    """Well-formedness faults, empty when the interpretation is valid."""
    faults: list[str] = []
    for decl in problem.sorts:
        dom = interp.domains.get(decl.name)
        if dom is None:
            faults.append(f"missing domain for sort {decl.name}")
            continue
        if isinstance(decl.kind, EnumSort) and dom.labels != decl.kind.elements:
            faults.append(f"enum sort {decl.name} must keep its declared labels")
        if isinstance(decl.kind, IntRangeSort):
            want = tuple(str(v) for v in range(decl.kind.lo, decl.kind.hi + 1))
            if dom.labels != want:
                faults.append(f"integer sort {decl.name} must be labelled {decl.kind.lo}..{decl.kind.hi}")
    for sort in interp.domains:
        if problem.sort(sort) is None:
            faults.append(f"domain for undeclared sort {sort}")
    if faults:
        return faults

    def ok_element(e, sort: str) -> bool:
        return (isinstance(e, tuple) and len(e) == 2 and e[0] == sort
                and 0 <= e[1] < interp.domains[sort].size)

    for n in problem.vocab.names:
        v = interp.names.get(n.name)
        if v is None:
            faults.append(f"name {n.name} has no value")
        elif not ok_element(v, n.sort):
            faults.append(f"name {n.name} must denote an element of {n.sort}")
    for f in problem.vocab.functions:
        table = interp.functions.get(f.name)
        if table is None:
            faults.append(f"function {f.name} has no table")
            continue
        expected = list(arg_tuples(interp, f.arg_sorts))
        if set(table.keys()) != set(expected):
            faults.append(f"function {f.name} table must be total over its argument tuples")
            continue
        for args, value in table.items():
            if not ok_element(value, f.result_sort):
                faults.append(f"function {f.name}{args} must map into {f.result_sort}")
                break
    for p in problem.vocab.predicates:
        ext = interp.predicates.get(p.name)
        if ext is None:
            faults.append(f"predicate {p.name} has no extension")
            continue
        for tup in ext:
            if len(tup) != len(p.arg_sorts) or any(
                    not ok_element(e, s) for e, s in zip(tup, p.arg_sorts)):
                faults.append(f"predicate {p.name} extension contains an ill-sorted tuple")
                break
    return faults


def render_interpretation(problem: Problem, interp: Interpretation) -> str:
    """Deterministic per-symbol tables.

    Open sorts get a domain line; names one line each; functions one row per
    argument tuple; predicates their extension as a tuple list.
    """
    lines: list[str] = []
    lab = interp.label
    for decl in problem.sorts:
        if isinstance(decl.kind, OpenSort):
            dom = interp.domains[decl.name]
            lines.append(f"sort {decl.name} = {{ {', '.join(dom.labels)} }}")
    for n in problem.vocab.names:
        lines.append(f"{n.name} = {lab(interp.names[n.name])}")
    for f in problem.vocab.functions:
        table = interp.functions[f.name]
        for args in arg_tuples(interp, f.arg_sorts):
            rendered = ", ".join(lab(a) for a in args)
            lines.append(f"{f.name}({rendered}) = {lab(table[args])}")
    for p in problem.vocab.predicates:
        ext = sorted(interp.predicates[p.name])
        tuples = ", ".join("(" + ", ".join(lab(e) for e in tup) + ")" for tup in ext)
        lines.append(f"{p.name} = {{ {tuples} }}" if ext else f"{p.name} = {{ }}")
    return "\n".join(lines)
