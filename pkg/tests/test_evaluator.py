import pytest

from conftest import load

from lff.evaluator import (SpaceTooLarge, brute_force_models,
                           check_constraints, evaluate)
from lff.interpretation import Interpretation, SortDomain
from lff.parser import parse_formula


def small():
    return load("Sorts:\nc enum: r, g.\nVocabulary:\n"
                "predicate { p(c). }\nfunction { f(c): c. }\nname n: c.\n"
                "Constraints:\np(n).\n")


def interp_of(p, pred_ext, fun_table, name_val):
    return Interpretation(
        domains={"c": SortDomain(2, ("r", "g"))},
        names={"n": ("c", name_val)},
        functions={"f": {(("c", 0),): ("c", fun_table[0]),
                         (("c", 1),): ("c", fun_table[1])}},
        predicates={"p": set(pred_ext)},
    )


def test_evaluate_ground_atoms():
    p, tp = small()
    interp = interp_of(p, {(("c", 0),)}, (0, 1), 0)
    f = parse_formula("p(r) & ~p(g)", p)
    assert evaluate(interp, f)
    assert not evaluate(interp, parse_formula("p(g)", p))


def test_evaluate_quantifiers_and_connectives():
    p, _ = small()
    interp = interp_of(p, {(("c", 0),), (("c", 1),)}, (1, 0), 1)
    # binder sorts come from annotations here; the checker normally fills them
    assert evaluate(interp, parse_formula("ALL x: c p(x)", p))
    assert evaluate(interp, parse_formula("SOME x: c (p(x) & f(x) /= x)", p))
    assert not evaluate(interp, parse_formula("SOME x: c f(x) = x", p))
    assert evaluate(interp, parse_formula("ALL x: c (p(x) -> p(f(x)))", p))
    assert evaluate(interp, parse_formula("p(n) <-> p(g)", p))


def test_check_constraints_per_index():
    p, tp = small()
    good = interp_of(p, {(("c", 0),)}, (0, 0), 0)
    bad = interp_of(p, set(), (0, 0), 0)
    assert check_constraints(good, tp) == [True]
    assert check_constraints(bad, tp) == [False]


def test_int_semantics():
    p, tp = load("Sorts:\nv int: 1..3.\nVocabulary:\nname n: v.\nname m: v.\n"
                 "Constraints:\nn + 1 = m.\nn < m.\nm <= 3.\n")
    models = brute_force_models(tp, {})
    # n in {1, 2}, m = n + 1
    assert len(models) == 2
    for i in models:
        assert all(check_constraints(i, tp))


def test_out_of_range_arithmetic_is_false():
    p, tp = load("Sorts:\nv int: 1..3.\nVocabulary:\nname n: v.\n"
                 "Constraints:\nn + 1 = 4.\n")
    models = brute_force_models(tp, {})
    assert len(models) == 1  # only n = 3 makes the sum literal 4
    p2, tp2 = load("Sorts:\nv int: 1..3.\nVocabulary:\nname n: v.\n"
                   "Constraints:\nn + 3 = n.\n")
    assert brute_force_models(tp2, {}) == []


def test_brute_force_counts(mary_text):
    _, tp = load(mary_text)
    models = brute_force_models(tp, {"person": 1, "animal": 1, "place": 1})
    assert len(models) == 21
    canon = {i.canonical() for i in models}
    assert len(canon) == 21  # no duplicates


def test_brute_force_space_guard(mary_text):
    _, tp = load(mary_text)
    with pytest.raises(SpaceTooLarge):
        brute_force_models(tp, {"person": 3, "animal": 3, "place": 3})


def test_empty_constraint_list_every_interp_is_model():
    _, tp = load("Sorts:\nc enum: r.\nVocabulary:\npredicate { p(c). }\n"
                 "Constraints:\n")
    models = brute_force_models(tp, {})
    assert len(models) == 2  # p(r) free
