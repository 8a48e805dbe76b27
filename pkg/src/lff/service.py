"""HTTP facade over the engine: check, solve and diagnose for the three-box
submission form, the shipped puzzle library, named per-session saves, and an
append-only usage log.

The JSON field names are part of the public contract and documented in
docs/api.md; changing them breaks clients.
"""
from __future__ import annotations

import asyncio
import json
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import corpus, diagnose, engine
from .diagnostics import Diagnostic
from .grounder import DomainAssignment
from .interpretation import Interpretation
from .sat import Budget

MAX_BODY_BYTES = 256 * 1024
DEFAULT_DEADLINE = 10.0


@dataclass
class ServiceConfig:
    log_path: Optional[Path] = None      # usage log (JSON lines); None = no log
    data_dir: Optional[Path] = None      # saves persistence; None = in-memory
    max_deadline: float = 30.0
    pool_size: int = field(default_factory=lambda: os.cpu_count() or 2)
    queue_depth: int = 32
    webui_dir: Optional[Path] = None     # static browser UI mounted at /

    @staticmethod
    def from_env() -> "ServiceConfig":
        cfg = ServiceConfig()
        if os.environ.get("LFF_LOG_PATH"):
            cfg.log_path = Path(os.environ["LFF_LOG_PATH"])
        if os.environ.get("LFF_DATA_DIR"):
            cfg.data_dir = Path(os.environ["LFF_DATA_DIR"])
        if os.environ.get("LFF_MAX_DEADLINE_SECS"):
            cfg.max_deadline = float(os.environ["LFF_MAX_DEADLINE_SECS"])
        if os.environ.get("LFF_WEBUI_DIR"):
            cfg.webui_dir = Path(os.environ["LFF_WEBUI_DIR"])
        return cfg


class UsageLog:
    """Append-only JSON-lines event log behind a single lock, so concurrent
    requests never interleave partial lines."""

    def __init__(self, path: Optional[Path]):
        self.path = path
        self._lock = threading.Lock()

    def append(self, event: dict) -> None:
        if self.path is None:
            return
        line = json.dumps(event, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


class SaveError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class SavesStore:
    """Per-session named saves. (sessionId, name) is unique; updates use
    optimistic concurrency on the updatedAt stamp."""

    def __init__(self, data_dir: Optional[Path]):
        self._dir = data_dir / "saves" if data_dir else None
        self._lock = threading.Lock()
        self._saves: dict[str, dict] = {}
        if self._dir and self._dir.is_dir():
            for f in self._dir.glob("*.json"):
                rec = json.loads(f.read_text(encoding="utf-8"))
                self._saves[rec["saveId"]] = rec

    def _persist(self, rec: dict) -> None:
        if self._dir is None:
            return
        self._dir.mkdir(parents=True, exist_ok=True)
        tmp = self._dir / (rec["saveId"] + ".tmp")
        tmp.write_text(json.dumps(rec, ensure_ascii=False), encoding="utf-8")
        tmp.replace(self._dir / (rec["saveId"] + ".json"))

    def _drop(self, save_id: str) -> None:
        if self._dir is not None:
            (self._dir / (save_id + ".json")).unlink(missing_ok=True)

    @staticmethod
    def _now_ms() -> int:
        return time.time_ns() // 1_000_000

    def create(self, session: str, name: str, submission: dict) -> dict:
        with self._lock:
            for rec in self._saves.values():
                if rec["sessionId"] == session and rec["name"] == name:
                    raise SaveError(409, f"a save named {name!r} already exists")
            now = self._now_ms()
            rec = {"saveId": uuid.uuid4().hex, "sessionId": session,
                   "name": name, "submission": submission,
                   "createdAt": now, "updatedAt": now}
            self._saves[rec["saveId"]] = rec
            self._persist(rec)
            return rec

    def list(self, session: str) -> list[dict]:
        with self._lock:
            mine = [r for r in self._saves.values() if r["sessionId"] == session]
            return sorted(mine, key=lambda r: r["createdAt"])

    def get(self, session: str, save_id: str) -> dict:
        with self._lock:
            rec = self._saves.get(save_id)
            if rec is None or rec["sessionId"] != session:
                raise SaveError(404, "no such save")
            return rec

    def update(self, session: str, save_id: str, name: str, submission: dict,
               expected_updated_at: Optional[int]) -> dict:
        with self._lock:
            rec = self._saves.get(save_id)
            if rec is None or rec["sessionId"] != session:
                raise SaveError(404, "no such save")
            if expected_updated_at is not None and rec["updatedAt"] != expected_updated_at:
                raise SaveError(409, "save was modified by another request; reload it")
            for other in self._saves.values():
                if (other["saveId"] != save_id and other["sessionId"] == session
                        and other["name"] == name):
                    raise SaveError(409, f"a save named {name!r} already exists")
            now = self._now_ms()
            rec = {**rec, "name": name, "submission": submission,
                   "updatedAt": max(now, rec["updatedAt"] + 1)}
            self._saves[save_id] = rec
            self._persist(rec)
            return rec

    def delete(self, session: str, save_id: str) -> None:
        with self._lock:
            rec = self._saves.get(save_id)
            if rec is None or rec["sessionId"] != session:
                raise SaveError(404, "no such save")
            del self._saves[save_id]
            self._drop(save_id)


# -- request/response schemas (field names are the API contract) -------------

class OptionsModel(BaseModel):
    maxModels: int = Field(default=2, ge=1, le=100)
    deadlineSecs: float = Field(default=DEFAULT_DEADLINE, gt=0)
    bounds: dict[str, tuple[int, int]] = Field(default_factory=dict)
    symmetryBreaking: bool = False


class SubmissionModel(BaseModel):
    sorts: str = ""
    vocabulary: str = ""
    constraints: str = ""
    options: OptionsModel = Field(default_factory=OptionsModel)


class DiagnoseRequest(SubmissionModel):
    kind: str = Field(pattern="^(mus|approx)$")


class SaveBody(BaseModel):
    name: str = Field(min_length=1, max_length=200)
    sorts: str = ""
    vocabulary: str = ""
    constraints: str = ""
    updatedAt: Optional[int] = None  # PUT: optimistic concurrency check


def _diag_payload(d: Diagnostic) -> dict:
    return {
        "severity": d.severity,
        "line": d.line,
        "column": d.column,
        "offendingText": d.offending_text,
        "message": d.message,
        "detail": list(d.detail),
        "partialTree": d.partial_tree,
        "hints": list(d.hints),
        "rendered": d.render(),
    }


def _model_payload(da: DomainAssignment, interp: Interpretation) -> dict:
    functions = {}
    for f, table in sorted(interp.functions.items()):
        functions[f] = [
            {"args": [interp.label(a) for a in args], "value": interp.label(v)}
            for args, v in sorted(table.items())
        ]
    predicates = {}
    for p, ext in sorted(interp.predicates.items()):
        predicates[p] = [[interp.label(a) for a in args] for args in sorted(ext)]
    return {
        "sizes": dict(da.sizes),
        "names": {n: interp.label(e) for n, e in sorted(interp.names.items())},
        "functions": functions,
        "predicates": predicates,
    }


def _outcome_payload(out: engine.SolveOutcome) -> dict:
    errs = [d for d in out.diagnostics if d.severity == "error"]
    warns = [d for d in out.diagnostics if d.severity != "error"]
    warns.extend(out.warnings)
    return {
        "kind": out.kind,
        "unique": out.unique,
        "exhausted": out.exhausted,
        "complete": out.complete,
        "searched": [da.describe() for da in out.searched],
        "models": [_model_payload(da, i) for da, i in out.models],
        "diagnostics": [_diag_payload(d) for d in errs],
        "warnings": [_diag_payload(d) for d in warns],
        "stats": {
            "runs": out.stats.runs,
            "conflicts": out.stats.conflicts,
            "wallMs": int(out.stats.wall_time * 1000),
            "groundSizes": [{"sizes": s, "vars": v, "clauses": c}
                            for s, v, c in out.stats.ground_sizes],
            "bounds": {s: list(b) for s, b in out.stats.bounds.items()},
        },
    }


def _constraint_ref(tp, index: int, offset: int) -> dict:
    c = tp.problem.constraints[index]
    return {
        "index": index,
        "line": c.span.line,
        "boxLine": c.span.line - offset,
        "column": c.span.col,
        "text": tp.problem.source[c.span.start:c.span.end],
    }


def _constraints_line_offset(sorts: str, vocabulary: str) -> int:
    """Lines before the first line of the constraints box in the assembled
    text, so clients can map spans back onto their editor."""
    prefix = (engine.assemble_problem_text(sorts, vocabulary, "")
              .rstrip("\n") + "\n")
    return prefix.count("\n")


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    cfg = config or ServiceConfig.from_env()
    app = FastAPI(title="logical modelling workbench", docs_url=None, redoc_url=None)
    usage = UsageLog(cfg.log_path)
    saves = SavesStore(cfg.data_dir)
    pool = ThreadPoolExecutor(max_workers=cfg.pool_size)
    slots = threading.BoundedSemaphore(cfg.pool_size + cfg.queue_depth)

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "malformed request body",
                                     "detail": exc.errors()})

    @app.exception_handler(SaveError)
    async def save_error(request: Request, exc: SaveError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.middleware("http")
    async def body_cap(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and int(length) > MAX_BODY_BYTES:
            return JSONResponse(status_code=413,
                                content={"error": "request body over 256 KiB"})
        return await call_next(request)

    def session_of(request: Request, response: Response) -> str:
        sid = request.cookies.get("lff_session")
        if not sid:
            sid = uuid.uuid4().hex
            response.set_cookie("lff_session", sid, httponly=True, samesite="lax")
        return sid

    def clamp_deadline(secs: float) -> float:
        return min(secs, cfg.max_deadline)

    async def in_pool(fn, *args):
        """Run a solve on the worker pool; full queue means 503."""
        if not slots.acquire(blocking=False):
            return None
        try:
            return await asyncio.get_running_loop().run_in_executor(pool, fn, *args)
        finally:
            slots.release()

    def saturated() -> JSONResponse:
        return JSONResponse(
            status_code=503,
            content={"error": "all solver workers busy; retry shortly"})

    def log_event(session: str, action: str, text: str, kind: str, t0: float):
        usage.append({
            "timestamp": time.time_ns() // 1_000_000,
            "sessionId": session,
            "action": action,
            "fullText": text,
            "outcomeKind": kind,
            "durationMs": int((time.monotonic() - t0) * 1000),
        })

    # -- check/solve/diagnose ------------------------------------------------

    @app.post("/api/check")
    async def check(body: SubmissionModel, session: str = Depends(session_of)):
        text = engine.assemble_problem_text(body.sorts, body.vocabulary,
                                            body.constraints)
        t0 = time.monotonic()
        out = await in_pool(engine.run, text, engine.SolveOptions(mode="check"))
        if out is None:
            return saturated()
        log_event(session, "check", text, out.kind, t0)
        # a failed typecheck hands back one mixed list; clients get errors
        # and warnings in separate fields regardless
        errs = [d for d in out.diagnostics if d.severity == "error"]
        warns = [d for d in out.diagnostics if d.severity != "error"]
        warns.extend(out.warnings)
        return {
            "ok": out.kind == engine.CHECK_OK,
            "diagnostics": [_diag_payload(d) for d in errs],
            "warnings": [_diag_payload(d) for d in warns],
            "constraintsLineOffset": _constraints_line_offset(body.sorts,
                                                              body.vocabulary),
        }

    @app.post("/api/solve")
    async def solve(body: SubmissionModel, session: str = Depends(session_of)):
        text = engine.assemble_problem_text(body.sorts, body.vocabulary,
                                            body.constraints)
        opts = engine.SolveOptions(
            max_models=body.options.maxModels,
            per_sort_bounds={s: tuple(b) for s, b in body.options.bounds.items()},
            deadline=clamp_deadline(body.options.deadlineSecs),
            symmetry_breaking=body.options.symmetryBreaking,
        )
        t0 = time.monotonic()
        out = await in_pool(engine.run, text, opts)
        if out is None:
            return saturated()
        log_event(session, "solve", text, out.kind, t0)
        return _outcome_payload(out)

    def run_diagnosis(kind: str, text: str, opts: engine.SolveOptions):
        out = engine.run(text, opts)
        if out.kind == engine.INPUT_ERRORS:
            return out.kind, {"kind": "input-errors",
                              "diagnostics": [_diag_payload(d)
                                              for d in out.diagnostics]}
        if out.kind == engine.TIMEOUT:
            return out.kind, {"kind": "timeout"}
        if out.models:
            return "nothing-to-diagnose", {"kind": "nothing-to-diagnose"}
        # unsatisfiable: diagnose at the smallest searched domain assignment
        from . import parser, typecheck, grounder
        tp = typecheck.check(parser.parse_problem(text))
        da = (out.searched[0] if out.searched
              else grounder.domain_assignment(tp.problem, {}))
        budget = Budget.of(seconds=opts.deadline)
        try:
            if kind == "mus":
                rep = diagnose.high_level_mus(tp, da, budget=budget)
            else:
                rep = diagnose.approximate_solution(tp, da, budget=budget)
        except diagnose.NothingToDiagnose:
            return "nothing-to-diagnose", {"kind": "nothing-to-diagnose"}
        return rep.kind, (tp, da, rep)

    @app.post("/api/diagnose")
    async def diagnose_route(body: DiagnoseRequest,
                             session: str = Depends(session_of)):
        text = engine.assemble_problem_text(body.sorts, body.vocabulary,
                                            body.constraints)
        opts = engine.SolveOptions(
            max_models=1,
            per_sort_bounds={s: tuple(b) for s, b in body.options.bounds.items()},
            deadline=clamp_deadline(body.options.deadlineSecs),
        )
        t0 = time.monotonic()
        got = await in_pool(run_diagnosis, body.kind, text, opts)
        if got is None:
            return saturated()
        kind, payload = got
        log_event(session, "diagnose", text, kind, t0)
        if isinstance(payload, dict):
            return payload
        tp, da, rep = payload
        offset = _constraints_line_offset(body.sorts, body.vocabulary)
        resp = {"kind": rep.kind, "sizes": dict(da.sizes)}
        if rep.kind == diagnose.HIGH_LEVEL_MUS:
            resp["minimal"] = rep.minimal
            resp["constraints"] = [_constraint_ref(tp, i, offset)
                                   for i in sorted(rep.constraints)]
        else:
            resp["optimal"] = rep.optimal
            resp["satisfiedCount"] = rep.satisfied_count
            resp["violated"] = [_constraint_ref(tp, i, offset)
                                for i in sorted(rep.violated)]
            resp["model"] = _model_payload(da, rep.interp)
        return resp

    # -- puzzles -------------------------------------------------------------

    @app.get("/api/puzzles")
    async def puzzles(level: Optional[str] = None):
        try:
            records = corpus.list_puzzles(level)
        except ValueError as e:
            return JSONResponse(status_code=400, content={"error": str(e)})
        return {"puzzles": [{"id": r.id, "title": r.title, "level": r.level,
                             "expectedModels": r.expected_models}
                            for r in records]}

    @app.get("/api/puzzles/{puzzle_id}")
    async def puzzle(puzzle_id: str):
        try:
            rec = corpus.load(puzzle_id)
        except KeyError:
            return JSONResponse(status_code=404,
                                content={"error": f"no puzzle {puzzle_id!r}"})
        sorts, vocabulary = _skeleton_boxes(rec.reference_encoding)
        return {
            "id": rec.id, "title": rec.title, "level": rec.level,
            "statement": rec.statement,
            "expectedModels": rec.expected_models,
            "bounds": {s: list(b) for s, b in rec.bounds.items()},
            "skeleton": {"sorts": sorts, "vocabulary": vocabulary,
                         "constraints": ""},
        }

    # -- saves ---------------------------------------------------------------

    def save_payload(rec: dict) -> dict:
        return {k: rec[k] for k in
                ("saveId", "name", "submission", "createdAt", "updatedAt")}

    @app.post("/api/saves", status_code=201)
    async def create_save(body: SaveBody, session: str = Depends(session_of)):
        sub = {"sorts": body.sorts, "vocabulary": body.vocabulary,
               "constraints": body.constraints}
        return save_payload(saves.create(session, body.name, sub))

    @app.get("/api/saves")
    async def list_saves(session: str = Depends(session_of)):
        return {"saves": [save_payload(r) for r in saves.list(session)]}

    @app.get("/api/saves/{save_id}")
    async def get_save(save_id: str, session: str = Depends(session_of)):
        return save_payload(saves.get(session, save_id))

    @app.put("/api/saves/{save_id}")
    async def put_save(save_id: str, body: SaveBody,
                       session: str = Depends(session_of)):
        sub = {"sorts": body.sorts, "vocabulary": body.vocabulary,
               "constraints": body.constraints}
        return save_payload(saves.update(session, save_id, body.name, sub,
                                         body.updatedAt))

    @app.delete("/api/saves/{save_id}", status_code=204)
    async def delete_save(save_id: str, session: str = Depends(session_of)):
        saves.delete(session, save_id)
        return Response(status_code=204)

    if cfg.webui_dir is not None:
        # serve the built browser UI from the same origin as the API, so the
        # session cookie flows without any cross origin setup; /api/* routes
        # are registered first and win
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=cfg.webui_dir, html=True),
                  name="webui")

    return app


def _skeleton_boxes(encoding: str) -> tuple[str, str]:
    """Sorts and vocabulary sections of a reference encoding, for prefilling
    the editor while leaving the constraints to the student."""
    sorts: list[str] = []
    vocab: list[str] = []
    target: Optional[list[str]] = None
    for line in encoding.splitlines():
        stripped = line.strip()
        if stripped == "Sorts:":
            target = sorts
            continue
        if stripped == "Vocabulary:":
            target = vocab
            continue
        if stripped == "Constraints:":
            target = None
            continue
        if target is not None:
            target.append(line)
    return "\n".join(sorts).strip("\n"), "\n".join(vocab).strip("\n")


def main(port: Optional[int] = None,
         webui_dir: Optional[Path] = None) -> None:
    """Entry point for `serve`: binds uvicorn on LFF_PORT or the given port."""
    import uvicorn
    cfg = ServiceConfig.from_env()
    if webui_dir is not None:
        cfg.webui_dir = webui_dir
    uvicorn.run(create_app(cfg), host="127.0.0.1",
                port=port or int(os.environ.get("LFF_PORT", "8000")))
