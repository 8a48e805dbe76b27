from conftest import MARY, load

from lff.parser import parse_problem
from lff.syntax import Exists, Forall
from lff.typecheck import check, infer_variable_sorts, TypedProblem


def diags_for(text):
    p = parse_problem(text)
    assert not isinstance(p, list), "\n".join(d.render() for d in p)
    out = check(p)
    assert isinstance(out, list), "expected diagnostics"
    return [d for d in out if d.severity == "error"]


def test_mary_types_with_inferred_binders(mary_text):
    _, tp = load(mary_text)
    f = tp.problem.constraints[0].formula
    assert isinstance(f, Exists)
    assert tp.binder_sorts[id(f)] == "animal"
    inner = f
    while not isinstance(inner, Forall):
        inner = inner.body if hasattr(inner, "body") else inner.right
    assert tp.binder_sorts[id(inner)] == "place"


def test_golden_argument_type_mismatch(mary_text):
    bad = mary_text + "had(Mary, SOME x lamb(x)).\n"
    errs = diags_for(bad)
    assert len(errs) == 1
    d = errs[0]
    assert d.message == "Type mismatch with argument of had"
    for line in ('the main operator "had" expects argument 2 to be of type animal',
                 "but argument 2 is",
                 "  SOME x lamb(x)",
                 "which is of type bool."):
        assert line in d.detail, (line, d.detail)
    rendered = d.render()
    assert "Parse tree" in rendered
    assert "misplaced parentheses and wrong names" in rendered


def test_wrong_argument_sort(mary_text):
    errs = diags_for(mary_text + "stature(Mary) = little.\n")
    assert any("stature" in d.message or "stature" in "\n".join(d.detail)
               for d in errs)
    joined = "\n".join(errs[0].detail)
    assert "argument 1" in joined and "animal" in joined


def test_undeclared_symbol(mary_text):
    errs = diags_for(mary_text + "petted(Mary).\n")
    assert any("petted" in d.message for d in errs)


def test_arity_mismatch(mary_text):
    errs = diags_for(mary_text + "SOME x had(Mary, x, x).\n")
    joined = errs[0].message + "\n".join(errs[0].detail)
    assert "2" in joined and "3" in joined


def test_equality_across_sorts(mary_text):
    errs = diags_for(mary_text + "hue_of_snow = Mary.\n")
    assert errs


def test_conflicting_variable_sort(mary_text):
    errs = diags_for(mary_text + "SOME x (lamb(x) & Went(x, x)).\n")
    joined = " ".join(d.message + " ".join(d.detail) for d in errs)
    assert "x" in joined


def test_unresolvable_variable_sort():
    errs = diags_for("Sorts:\nt enum: e.\nVocabulary:\npredicate { p(t). }\n"
                     "Constraints:\nSOME x p(e).\n")
    assert any("infer" in d.message.lower() or "sort" in d.message.lower()
               for d in errs)
    # an annotation fixes it
    _, tp = load("Sorts:\nt enum: e.\nVocabulary:\npredicate { p(t). }\n"
                 "Constraints:\nSOME x: t p(e).\n")
    assert isinstance(tp, TypedProblem)


def test_annotation_must_match_usage():
    errs = diags_for("Sorts:\nt enum: e.\nu enum: f.\nVocabulary:\n"
                     "predicate { p(t). }\nConstraints:\nSOME x: u p(x).\n")
    assert errs


def test_formula_where_term_expected_and_vice_versa(mary_text):
    errs = diags_for(mary_text + "SOME x (hue(x)).\n")
    assert errs  # a colour-valued term is not a formula


def test_int_variable_needs_exact_sort():
    # two int-range sorts do not unify through a shared variable
    errs = diags_for("Sorts:\na int: 0..2.\nb int: 0..2.\nVocabulary:\n"
                     "function { f(a): b. }\nConstraints:\n"
                     "ALL s (f(s) >= 0 & s >= 0 & f(f(s)) >= 0).\n")
    assert errs


def test_int_arithmetic_coerces_into_range_positions():
    _, tp = load("Sorts:\nclock int: 0..2.\nVocabulary:\n"
                 "function { at(clock): clock. }\nConstraints:\n"
                 "ALL t (t >= 1 -> at(t - 1) = at(t)).\n")
    assert isinstance(tp, TypedProblem)


def test_int_comparison_requires_int_operands(mary_text):
    errs = diags_for(mary_text + "hue_of_snow >= 1.\n")
    assert errs


def test_infer_variable_sorts_helper(mary_text):
    p, _ = load(mary_text)
    from lff.parser import parse_formula
    body = parse_formula("lamb(x)", p)
    assert infer_variable_sorts("x", body, p) == "animal"
    body2 = parse_formula("x = x", p)
    got = infer_variable_sorts("x", body2, p)
    assert not isinstance(got, str)  # no occurrence pins a sort


def test_unused_symbol_warnings(mary_text):
    # drop the constraint: every declared symbol becomes unused
    text = mary_text[:mary_text.index("SOME x")]
    _, tp = load(text)
    msgs = [w.message for w in tp.warnings]
    assert any("no constraints" in m for m in msgs)
    assert any("had" in m and "never used" in m for m in msgs)


def test_clean_problem_has_no_warnings(mary_text):
    _, tp = load(mary_text)
    assert tp.warnings == ()
