from conftest import MARY, load

from lff.parser import parse_problem, tokenize
from lff.syntax import (And, EnumSort, Eq, Exists, Forall, Iff, Implies,
                        IntArith, IntCmp, IntLit, IntRangeSort, Neq, Not,
                        OpenSort, Or)


def test_sort_declaration_kinds():
    p, _ = load("""Sorts:
person.
team enum: a, b, c.
clock int: 0..2.
Vocabulary:
Constraints:
""")
    by_name = {s.name: s.kind for s in p.sorts}
    assert isinstance(by_name["person"], OpenSort)
    assert isinstance(by_name["team"], EnumSort)
    assert by_name["team"].elements == ("a", "b", "c")
    assert isinstance(by_name["clock"], IntRangeSort)
    assert (by_name["clock"].lo, by_name["clock"].hi) == (0, 2)


def test_vocabulary_blocks(mary_text):
    p, _ = load(mary_text)
    preds = {d.name: d.arg_sorts for d in p.vocab.predicates}
    assert preds["had"] == ("person", "animal")
    assert preds["Went"] == ("person", "place")
    funcs = {d.name: (d.arg_sorts, d.result_sort) for d in p.vocab.functions}
    assert funcs["hue"] == (("animal",), "colour")
    names = {d.name: d.sort for d in p.vocab.names}
    assert names == {"Mary": "person", "hue_of_snow": "colour"}


def test_case_sensitive_identifiers(mary_text):
    p, _ = load(mary_text)
    assert {d.name for d in p.vocab.predicates} >= {"Went", "went"}


def test_connective_precedence():
    p, _ = load("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). b(t). c(t). }\n"
                "Constraints:\nALL x (a(x) | b(x) & c(x)).\n")
    body = p.constraints[0].formula.body
    # & binds tighter than |
    assert isinstance(body, Or)
    assert isinstance(body.right, And)


def test_implication_right_associative():
    p, _ = load("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). b(t). c(t). }\n"
                "Constraints:\nALL x (a(x) -> b(x) -> c(x)).\n")
    body = p.constraints[0].formula.body
    assert isinstance(body, Implies)
    assert isinstance(body.right, Implies)


def test_iff_loosest():
    p, _ = load("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). b(t). }\n"
                "Constraints:\nALL x (a(x) <-> ~b(x)).\n")
    body = p.constraints[0].formula.body
    assert isinstance(body, Iff)
    assert isinstance(body.right, Not)


def test_quantifier_comma_list_shares_annotation():
    p, _ = load("Sorts:\nt enum: e.\nu enum: f.\nVocabulary:\n"
                "predicate { r(t, t). s(u). }\nConstraints:\n"
                "ALL x, y: t r(x, y).\nSOME z: u s(z).\n")
    outer = p.constraints[0].formula
    assert isinstance(outer, Forall) and outer.var == "x"
    inner = outer.body
    assert isinstance(inner, Forall) and inner.var == "y"
    assert outer.sort == "t" and inner.sort == "t"
    some = p.constraints[1].formula
    assert isinstance(some, Exists) and some.sort == "u"


def test_mixed_quantifier_nesting():
    p, _ = load("Sorts:\nt enum: e, g.\nVocabulary:\npredicate { r(t, t). }\n"
                "Constraints:\nALL x SOME y r(x, y).\n")
    f = p.constraints[0].formula
    assert isinstance(f, Forall) and isinstance(f.body, Exists)


def test_equality_and_disequality_nodes():
    p, _ = load("Sorts:\nt enum: e, g.\nVocabulary:\nname n: t.\n"
                "Constraints:\nn = e.\nn /= g.\n")
    assert isinstance(p.constraints[0].formula, Eq)
    assert isinstance(p.constraints[1].formula, Neq)


def test_int_comparison_and_arithmetic():
    p, _ = load("Sorts:\nv int: 0..3.\nVocabulary:\nname n: v.\nname m: v.\n"
                "Constraints:\nn + 1 <= m.\nm - 1 >= n.\nn < 3.\nn > 0.\n")
    cmp0 = p.constraints[0].formula
    assert isinstance(cmp0, IntCmp) and cmp0.op == "<="
    assert isinstance(cmp0.left, IntArith) and cmp0.left.op == "+"
    assert isinstance(cmp0.left.right, IntLit)
    assert {c.formula.op for c in p.constraints} == {"<=", ">=", "<", ">"}


def test_source_spans_point_into_text(mary_text):
    p, _ = load(mary_text)
    c = p.constraints[0]
    snippet = p.source[c.span.start:c.span.end]
    assert snippet.startswith("SOME x (had(Mary, x)")
    want_line = mary_text[:mary_text.index("SOME x (had")].count("\n") + 1
    assert c.span.line == want_line


def test_comments_ignored():
    p, _ = load("Sorts:\n% a comment line\nt enum: e.\nVocabulary:\n"
                "predicate { a(t). }  % trailing\nConstraints:\na(e).\n")
    assert len(p.constraints) == 1


def test_missing_section_header_reported():
    out = parse_problem("Vocabulary:\nConstraints:\n")
    assert isinstance(out, list)
    assert any("Sorts" in d.message for d in out)


def test_unbalanced_parenthesis_diagnostic():
    out = parse_problem("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). }\n"
                        "Constraints:\na(e.\n")
    assert isinstance(out, list)
    d = out[0]
    assert d.severity == "error" and d.line == 6
    # a partial tree is offered to orient the reader
    assert "a" in (d.partial_tree or "")


def test_missing_final_period():
    out = parse_problem("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). }\n"
                        "Constraints:\na(e)\n")
    assert isinstance(out, list)
    assert any("'.'" in d.message for d in out)


def test_duplicate_declaration_rejected():
    out = parse_problem("Sorts:\nt enum: e.\nt enum: f.\nVocabulary:\nConstraints:\n")
    assert isinstance(out, list)
    assert any("Duplicate" in d.message for d in out)


def test_keyword_cannot_name_a_sort():
    out = parse_problem("Sorts:\nALL enum: e.\nVocabulary:\nConstraints:\n")
    assert isinstance(out, list)


def test_tokenizer_positions():
    toks = tokenize("ALL x\n  (p(x))", start_line=4)
    assert (toks[0].kind, toks[0].text, toks[0].line, toks[0].col) == \
        ("QUANT", "ALL", 4, 1)
    lparen = next(t for t in toks if t.text == "(")
    assert lparen.line == 5


def test_errors_in_multiple_constraints_all_reported():
    out = parse_problem("Sorts:\nt enum: e.\nVocabulary:\npredicate { a(t). }\n"
                        "Constraints:\na(e).\na(e))).\na(e.\n")
    assert isinstance(out, list)
    assert len(out) >= 2
