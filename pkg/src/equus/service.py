"""HTTP API for the interactive grid UI.

Sessions are in-memory with idle expiry; each holds one sheet. Requests
within a session are serialized behind a lock, so the UI never observes a
half-applied edit. The select endpoint returns exactly the scene document
the local pipeline produces (evaluate, layout, serialize): there is no
hidden server-side state.
"""

from __future__ import annotations

import json
import logging
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .addresses import AddressError, CellAddress, format_address, parse_address
from .evaluate import evaluate
from .layout import layout
from .lexer import ParseError
from .render import to_json
from .sheet import FormulaCell, Sheet
from .values import format_value
from . import ast

log = logging.getLogger(__name__)

SESSION_TTL_SECONDS = 30 * 60.0


class CellBody(BaseModel):
    raw: str


class SelectBody(BaseModel):
    addr: str | None = None


@dataclass
class Session:
    id: str
    sheet: Sheet
    selected: CellAddress | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


def default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(
    initial_sheet: Sheet | None = None,
    ui_dir: Path | None = None,
    session_ttl: float = SESSION_TTL_SECONDS,
) -> FastAPI:
    app = FastAPI(title="equus", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        response = await call_next(request)
        log.info("%s %s -> %d", request.method, request.url.path, response.status_code)
        return response

    def _purge() -> None:
        now = time.monotonic()
        stale = [sid for sid, s in sessions.items() if now - s.last_used > session_ttl]
        for sid in stale:
            sessions.pop(sid, None)

    def _get_session(session_id: str) -> Session | None:
        with sessions_lock:
            _purge()
            session = sessions.get(session_id)
            if session:
                session.last_used = time.monotonic()
            return session

    def _not_found() -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": "unknown session"})

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/session")
    def create_session():
        session = Session(
            id=uuid.uuid4().hex,
            sheet=Sheet(dict(initial_sheet.cells)) if initial_sheet else Sheet(),
        )
        with sessions_lock:
            _purge()
            sessions[session.id] = session
        return {"sessionId": session.id}

    @app.put("/api/session/{session_id}/cell/{addr}")
    def put_cell(session_id: str, addr: str, body: CellBody):
        session = _get_session(session_id)
        if session is None:
            return _not_found()
        try:
            address = parse_address(addr)
        except AddressError as err:
            return JSONResponse(status_code=400, content={"detail": str(err)})
        with session.lock:
            try:
                session.sheet.set_cell(address, body.raw)
            except ParseError as err:
                return JSONResponse(status_code=422, content={"parseError": err.to_dict()})
        return {"ok": True}

    @app.post("/api/session/{session_id}/select")
    def select(session_id: str, body: SelectBody):
        session = _get_session(session_id)
        if session is None:
            return _not_found()
        with session.lock:
            if body.addr is None:
                session.selected = None
                return {"blank": True}
            try:
                address = parse_address(body.addr)
            except AddressError as err:
                return JSONResponse(status_code=400, content={"detail": str(err)})
            session.selected = address
            content = session.sheet.get(address)
            if not isinstance(content, FormulaCell):
                return {"blank": True}
            tree = evaluate(content.expr, session.sheet.context())
            scene_text = to_json(layout(tree))
            return {
                "sceneGraph": json.loads(scene_text),
                "formulaText": ast.unparse(content.expr),
                "value": format_value(tree.value),
            }

    @app.get("/api/session/{session_id}/sheet")
    def get_sheet(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _not_found()
        with session.lock:
            ctx = session.sheet.context()
            out = {}
            for (col, row) in sorted(session.sheet.cells, key=lambda k: (k[1], k[0])):
                address = CellAddress(col, row)
                out[format_address(address)] = {
                    "raw": session.sheet.cells[(col, row)].raw,
                    "displayValue": format_value(ctx.resolve(address)),
                }
            return out

    mount_dir = ui_dir if ui_dir is not None else default_ui_dir()
    if mount_dir is not None and Path(mount_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(mount_dir), html=True), name="ui")

    return app
