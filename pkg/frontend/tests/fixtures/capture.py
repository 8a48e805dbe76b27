"""Regenerate the JSON fixtures from a live in-process service.

Run from the repository root with the package installed:

    python3 frontend/tests/fixtures/capture.py

Every fixture the UI tests consume is a verbatim response body; none are
written by hand.
"""
import json
import pathlib
import sys

from fastapi.testclient import TestClient

ROOT = pathlib.Path(__file__).resolve().parents[3]
sys.path.insert(0, str(ROOT / "tests"))

from conftest import MARY_CONSTRAINTS, MARY_SORTS, MARY_VOCAB  # noqa: E402

from lff.service import ServiceConfig, create_app  # noqa: E402

HERE = pathlib.Path(__file__).resolve().parent

CONTRA_SORTS = "thing enum: t."
CONTRA_VOCAB = "predicate {\n  p(thing).\n  q(thing).\n}"
CONTRA_CONSTRAINTS = "ALL x p(x).\nALL x ~p(x).\nALL x q(x)."


def mary_body(**extra):
    body = {"sorts": MARY_SORTS, "vocabulary": MARY_VOCAB,
            "constraints": MARY_CONSTRAINTS}
    body.update(extra)
    return body


def main(tmp: pathlib.Path) -> None:
    cfg = ServiceConfig(log_path=tmp / "usage.jsonl", data_dir=tmp / "data")
    out: dict[str, object] = {}
    with TestClient(create_app(cfg)) as client:
        out["check-ok"] = client.post("/api/check", json=mary_body()).json()
        out["check-golden-error"] = client.post("/api/check", json=mary_body(
            constraints="had(Mary, SOME x lamb(x)).\n")).json()
        out["check-empty"] = client.post("/api/check", json={
            "sorts": "", "vocabulary": "", "constraints": ""}).json()
        out["solve-mary"] = client.post("/api/solve", json=mary_body(
            options={"maxModels": 25,
                     "bounds": {"person": [1, 1], "animal": [1, 1],
                                "place": [1, 1]}})).json()
        contra = {"sorts": CONTRA_SORTS, "vocabulary": CONTRA_VOCAB,
                  "constraints": CONTRA_CONSTRAINTS}
        out["mary-submission"] = mary_body()
        out["contradiction-submission"] = dict(contra)
        out["solve-contradiction"] = client.post("/api/solve",
                                                 json=contra).json()
        out["solve-unique"] = client.post("/api/solve", json=dict(
            contra, constraints="ALL x p(x).\nALL x q(x).",
            options={"bounds": {"thing": [1, 1]}})).json()
        out["diagnose-mus"] = client.post("/api/diagnose", json=dict(
            contra, kind="mus")).json()
        out["diagnose-approx"] = client.post("/api/diagnose", json=dict(
            contra, kind="approx")).json()
        out["puzzles"] = client.get("/api/puzzles").json()
        out["puzzles-beginner"] = client.get("/api/puzzles",
                                             params={"level": "Beginner"}).json()
        out["puzzle-logic-games"] = client.get("/api/puzzles/logic-games").json()
        out["puzzle-mary"] = client.get("/api/puzzles/mary-lamb").json()
        r404 = client.get("/api/puzzles/nope")
        assert r404.status_code == 404
        out["puzzle-404"] = r404.json()
        created = client.post("/api/saves", json=dict(
            mary_body(), name="mary session"))
        assert created.status_code == 201
        out["save"] = created.json()

    for name, payload in out.items():
        path = HERE / f"{name}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path.name}")


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as td:
        main(pathlib.Path(td))
