import dataclasses
import time

import pytest

from lff import corpus
from lff.interpretation import Interpretation, SortDomain

EXPECTED = {
    "mary-lamb": ("Beginner", 21),
    "fair-day": ("Beginner", 3),
    "three-drinks": ("Beginner", 1),
    "five-houses": ("Intermediate", 1),
    "relay-finish": ("Intermediate", 1),
    "logic-games": ("Advanced", 1),
    "blocks-restack": ("Expert", 1),
    "latin-square": ("Logician", 1),
    "circuit-fault": ("Logician", 3),
}


def test_listing_is_complete_and_ordered():
    records = corpus.list_puzzles()
    assert {r.id for r in records} == set(EXPECTED)
    rank = {name: i for i, name in enumerate(corpus.LEVELS)}
    keys = [(rank[r.level], r.id) for r in records]
    assert keys == sorted(keys)
    for r in records:
        level, n = EXPECTED[r.id]
        assert r.level == level
        assert r.expected_models == n


def test_level_filter():
    beginners = corpus.list_puzzles(level="Beginner")
    assert {r.id for r in beginners} == {"mary-lamb", "fair-day", "three-drinks"}
    with pytest.raises(ValueError):
        corpus.list_puzzles(level="Novice")


def test_load_unknown_id():
    with pytest.raises(KeyError):
        corpus.load("no-such-puzzle")


def test_record_contents():
    r = corpus.load("mary-lamb")
    assert r.title
    assert r.statement.strip()
    assert "Constraints:" in r.reference_encoding
    assert r.bounds == {"person": (1, 1), "animal": (1, 1), "place": (1, 1)}
    assert r.solution is None  # 21 models, nothing frozen
    assert r.summary() == {"id": "mary-lamb", "title": r.title,
                           "level": "Beginner", "expected_models": 21}


def test_unique_puzzles_ship_a_frozen_solution():
    for r in corpus.list_puzzles():
        if r.expected_models == 1:
            assert r.solution is not None, r.id
            assert r.solution.endswith("\n")
        else:
            assert r.solution is None, r.id


def test_render_solution_format():
    interp = Interpretation(
        domains={"t": SortDomain(2, ("a", "b"))},
        names={"x": ("t", 1)},
        functions={"f": {(("t", 0),): ("t", 1), (("t", 1),): ("t", 0)}},
        predicates={"p": frozenset({(("t", 0),)})},
    )
    assert corpus.render_solution(interp) == (
        "x = b\n"
        "f(a) = b\n"
        "f(b) = a\n"
        "p(a)\n"
    )


def test_verify_all_passes_within_deadline():
    for record in corpus.list_puzzles():
        t0 = time.monotonic()
        ok, message = corpus.verify(record)
        elapsed = time.monotonic() - t0
        assert ok, message
        assert elapsed < corpus.VERIFY_DEADLINE, (record.id, elapsed)


def test_verify_rejects_tampered_expectations():
    record = corpus.load("three-drinks")
    wrong_count = dataclasses.replace(record, expected_models=2, solution=None)
    ok, message = corpus.verify(wrong_count)
    assert not ok
    assert "expected 2" in message

    wrong_solution = dataclasses.replace(
        record, solution=record.solution.replace(" = ", " = not-", 1))
    ok, message = corpus.verify(wrong_solution)
    assert not ok
    assert "differs from frozen solution" in message
