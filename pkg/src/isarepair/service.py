"""Local HTTP service exposing session operations to the web UI.

Every session-scoped response carries the session's monotonically
increasing revision; mutating requests must echo the latest revision back
and are rejected with ``stale_revision`` when they lag behind.  Engine
errors map to 4xx responses with their machine-readable codes.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .errors import IsaRepairError
from .hierarchy import hierarchy_edges
from .model import ConceptName, IsaStatement, normalize_terminology
from .parser import ParseError, parse_missing, parse_ontology, serialize_ontology
from .session import RepairSession, UNREPAIRED, create_session


@dataclass
class SessionHandle:
    session: RepairSession
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class _Registry:
    def __init__(self) -> None:
        self._sessions: dict[str, SessionHandle] = {}
        self._lock = threading.Lock()

    def add(self, session: RepairSession) -> str:
        sid = uuid.uuid4().hex[:12]
        with self._lock:
            self._sessions[sid] = SessionHandle(session)
        return sid

    def get(self, sid: str) -> SessionHandle:
        handle = self._sessions.get(sid)
        if handle is None:
            raise _HttpError(404, "unknown_session", f"no session '{sid}'")
        return handle

    def ids(self) -> list[str]:
        return sorted(self._sessions)


class _HttpError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class CreateSessionBody(BaseModel):
    ontology_text: str | None = None
    ontology_path: str | None = None
    missing_text: str | None = None
    missing_path: str | None = None


class AxiomBody(BaseModel):
    sub: str
    sup: str

    def statement(self) -> IsaStatement:
        return IsaStatement(ConceptName(self.sub), ConceptName(self.sup))


class GenerateBody(BaseModel):
    revision: int
    variant: str = "basic"
    force: bool = False


class ValidateBody(BaseModel):
    revision: int
    axiom: AxiomBody
    verdict: str


class RepairBody(BaseModel):
    revision: int
    axiom: AxiomBody
    source: str
    target: str


class RevokeBody(BaseModel):
    revision: int


class PathBody(BaseModel):
    path: str


def _read_fixture(base_dir: Path | None, path_text: str) -> str:
    path = Path(path_text)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    if not path.exists():
        raise _HttpError(400, "missing_file", f"no such file: {path}")
    return path.read_text()


def create_app(
    fixture_dir: str | Path | None = None,
    data_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="isarepair service")
    # the service binds localhost; the browser UI may be opened from disk
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = _Registry()
    fixtures = Path(fixture_dir) if fixture_dir else None
    snapshots = Path(data_dir) if data_dir else Path.cwd()
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    @app.exception_handler(IsaRepairError)
    async def _domain_error(_req: Request, exc: IsaRepairError):
        return JSONResponse(status_code=422, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(ParseError)
    async def _parse_error(_req: Request, exc: ParseError):
        d = exc.diagnostic
        return JSONResponse(
            status_code=400,
            content={
                "code": "parse_error",
                "message": d.message,
                "line": d.line,
                "column": d.column,
            },
        )

    @app.exception_handler(_HttpError)
    async def _http_error(_req: Request, exc: _HttpError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    def _view(sid: str, handle: SessionHandle) -> dict:
        status = handle.session.status()
        return {
            "session_id": sid,
            "revision": handle.revision,
            "entries": status.entries,
            "verdicts": status.verdicts,
            "edits": status.edits,
            "repaired_count": status.repaired_count,
            "unrepaired_count": status.unrepaired_count,
        }

    def _check_revision(handle: SessionHandle, revision: int) -> None:
        if revision != handle.revision:
            raise _HttpError(
                409,
                "stale_revision",
                f"request revision {revision} lags session revision {handle.revision}",
            )

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    @app.get("/sessions")
    def list_sessions() -> dict:
        return {"sessions": registry.ids()}

    @app.post("/sessions")
    def create(body: CreateSessionBody) -> dict:
        if body.ontology_text is not None:
            ontology_text = body.ontology_text
        elif body.ontology_path is not None:
            ontology_text = _read_fixture(fixtures, body.ontology_path)
        else:
            raise _HttpError(400, "missing_ontology", "provide ontology_text or ontology_path")
        if body.missing_text is not None:
            missing_text = body.missing_text
        elif body.missing_path is not None:
            missing_text = _read_fixture(fixtures, body.missing_path)
        else:
            raise _HttpError(400, "missing_missing", "provide missing_text or missing_path")

        axioms, roles = parse_ontology(ontology_text)
        base = normalize_terminology(axioms, roles)
        missing = parse_missing(missing_text)
        session = create_session(base, missing)
        sid = registry.add(session)
        return _view(sid, registry.get(sid))

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict:
        return _view(sid, registry.get(sid))

    @app.get("/sessions/{sid}/entries")
    def list_entries(sid: str) -> dict:
        handle = registry.get(sid)
        view = _view(sid, handle)
        return {
            "session_id": sid,
            "revision": handle.revision,
            "entries": view["entries"],
        }

    @app.post("/sessions/{sid}/entries/{idx}/generate")
    def generate(sid: str, idx: int, body: GenerateBody) -> dict:
        handle = registry.get(sid)
        with handle.lock:
            _check_revision(handle, body.revision)
            handle.session.generate_actions(
                idx, optimized=body.variant == "optimized", force=body.force
            )
            handle.revision += 1
            return _view(sid, handle)

    @app.post("/sessions/{sid}/validate")
    def validate(sid: str, body: ValidateBody) -> dict:
        handle = registry.get(sid)
        with handle.lock:
            _check_revision(handle, body.revision)
            handle.session.validate(body.axiom.statement(), body.verdict)
            handle.revision += 1
            return _view(sid, handle)

    @app.get("/sessions/{sid}/source-target")
    def source_target(sid: str, sub: str, sup: str) -> dict:
        from .abduction import source_target_sets

        handle = registry.get(sid)
        statement = IsaStatement(ConceptName(sub), ConceptName(sup))
        source, target = source_target_sets(handle.session.current, statement)
        return {
            "session_id": sid,
            "revision": handle.revision,
            "axiom": {"sub": sub, "sup": sup},
            "source": sorted(str(n) for n in source),
            "target": sorted(str(n) for n in target),
        }

    @app.post("/sessions/{sid}/entries/{idx}/repair")
    def repair(sid: str, idx: int, body: RepairBody) -> dict:
        handle = registry.get(sid)
        with handle.lock:
            _check_revision(handle, body.revision)
            handle.session.repair_axiom(
                idx,
                body.axiom.statement(),
                ConceptName(body.source),
                ConceptName(body.target),
            )
            handle.revision += 1
            return _view(sid, handle)

    @app.post("/sessions/{sid}/entries/{idx}/revoke")
    def revoke(sid: str, idx: int, body: RevokeBody) -> dict:
        handle = registry.get(sid)
        with handle.lock:
            _check_revision(handle, body.revision)
            handle.session.revoke(idx)
            handle.revision += 1
            return _view(sid, handle)

    @app.get("/sessions/{sid}/hierarchy")
    def hierarchy(sid: str) -> dict:
        handle = registry.get(sid)
        session = handle.session
        unrepaired = [
            e.relation for e in session.entries if e.status == UNREPAIRED
        ]
        edges = hierarchy_edges(
            session.current,
            session.base,
            [e.statement for e in session.edit_log],
            unrepaired,
        )
        return {
            "session_id": sid,
            "revision": handle.revision,
            "nodes": sorted(str(n) for n in session.current.original_names()),
            "edges": [
                {"sub": e.sub, "sup": e.sup, "provenance": e.provenance} for e in edges
            ],
        }

    @app.get("/sessions/{sid}/ontology")
    def ontology(sid: str) -> PlainTextResponse:
        handle = registry.get(sid)
        return PlainTextResponse(serialize_ontology(handle.session.current))

    @app.post("/sessions/{sid}/save")
    def save(sid: str, body: PathBody) -> dict:
        handle = registry.get(sid)
        path = (snapshots / body.path).resolve()
        if snapshots.resolve() not in path.parents and path != snapshots.resolve():
            raise _HttpError(400, "bad_path", "snapshot path escapes the data directory")
        path.parent.mkdir(parents=True, exist_ok=True)
        with handle.lock:
            handle.session.save(path)
        return {"session_id": sid, "revision": handle.revision, "path": str(path)}

    @app.post("/sessions/load")
    def load(body: PathBody) -> dict:
        path = (snapshots / body.path).resolve()
        if not path.exists():
            raise _HttpError(400, "missing_file", f"no such file: {path}")
        session = RepairSession.load(path)
        sid = registry.add(session)
        return _view(sid, registry.get(sid))

    return app
