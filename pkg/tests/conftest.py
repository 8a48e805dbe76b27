import pytest

MARY_SORTS = """\
person.
animal.
size enum: little, medium, big.
colour enum: green, white, purple.
place.
"""

MARY_VOCAB = """\
predicate {
  had(person, animal).
  Went(person, place).
  went(animal, place).
  lamb(animal).
}
function {
  hue(animal): colour.
  stature(animal): size.
}
name Mary: person.
name hue_of_snow: colour.
"""

MARY_CONSTRAINTS = """\
SOME x (had(Mary, x) & stature(x) = little & lamb(x)
  & (hue_of_snow = white -> hue(x) = white)
  & ALL y (Went(Mary, y) -> went(x, y))).
"""

MARY = (f"Sorts:\n{MARY_SORTS}\nVocabulary:\n{MARY_VOCAB}"
        f"\nConstraints:\n{MARY_CONSTRAINTS}")


@pytest.fixture
def mary_text():
    return MARY


def load(text):
    """parse + typecheck or fail the test with the diagnostics."""
    from lff.parser import parse_problem
    from lff.typecheck import check, TypedProblem
    p = parse_problem(text)
    assert not isinstance(p, list), "\n".join(d.render() for d in p)
    tp = check(p)
    assert isinstance(tp, TypedProblem), "\n".join(d.render() for d in tp)
    return p, tp


# -- acceptance reporting ----------------------------------------------------
# each criterion test calls record() exactly once; the terminal summary
# prints one line per criterion even when output capture is on

_RESULTS = []


def record(criterion, ok, detail=""):
    _RESULTS.append((criterion, bool(ok), detail))
    suffix = f"  [{detail}]" if detail else ""
    print(f"{criterion}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{criterion} failed: {detail}"


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(_RESULTS):
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(
            f"{criterion}: {'PASS' if ok else 'FAIL'}{suffix}")
