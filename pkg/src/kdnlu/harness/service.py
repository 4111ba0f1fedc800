"""HTTP service hosting live dialog sessions for the chat client.

Endpoints:
    POST   /api/session              -> {"session_id": ...}
    POST   /api/session/{id}/turn    {"text": ...} -> response + state view
    GET    /api/session/{id}/history -> {"history": [[speaker, text], ...]}
    DELETE /api/session/{id}

Turns on one session are exclusive: a second concurrent turn gets 409.
Sessions persist as JSON documents under the session directory and are
reloaded lazily after a restart. Static files (the chat client build) are
served from the configured directory.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..dialog import DialogState, next_turn
from ..dialog.state import SLOT_NAMES, RestaurantFact
from ..errors import KdnluError

log = logging.getLogger("kdnlu.service")


@dataclass
class ServiceConfig:
    session_dir: Optional[Path] = None
    static_dir: Optional[Path] = None
    synthesize_results: bool = True     # invent api_call results for live demos
    turn_delay: float = 0.0             # test hook: hold the session lock longer


def _synthetic_restaurants(state: DialogState) -> list[RestaurantFact]:
    slots = state.slots
    if None in (slots.cuisine, slots.location, slots.party_size, slots.price):
        return []
    facts = []
    for rating in (8, 5, 3):
        name = f"resto_{slots.location}_{slots.price}_{slots.cuisine}_{rating}stars"
        values = {
            "R_phone": f"{name}_phone",
            "R_cuisine": slots.cuisine,
            "R_address": f"{name}_address",
            "R_location": slots.location,
            "R_number": slots.party_size,
            "R_price": slots.price,
            "R_rating": str(rating),
        }
        facts.extend(RestaurantFact(name, attr, value) for attr, value in values.items())
    return facts


class SessionStore:
    """In-memory sessions with JSON persistence and per-session locks."""

    def __init__(self, directory: Optional[Path]):
        self.directory = directory
        if directory is not None:
            directory.mkdir(parents=True, exist_ok=True)
        self._states: dict[str, DialogState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def _path(self, session_id: str) -> Optional[Path]:
        if self.directory is None:
            return None
        return self.directory / f"{session_id}.json"

    def create(self) -> DialogState:
        session_id = uuid.uuid4().hex[:12]
        state = DialogState(session_id=session_id)
        with self._registry:
            self._states[session_id] = state
            self._locks[session_id] = threading.Lock()
        self._persist(state)
        return state

    def get(self, session_id: str) -> DialogState:
        with self._registry:
            if session_id in self._states:
                return self._states[session_id]
        path = self._path(session_id)
        if path is not None and path.exists():
            state = DialogState.from_json(path.read_text())
            with self._registry:
                self._states[session_id] = state
                self._locks.setdefault(session_id, threading.Lock())
            return state
        raise KeyError(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry:
            if session_id not in self._locks:
                raise KeyError(session_id)
            return self._locks[session_id]

    def update(self, state: DialogState) -> None:
        with self._registry:
            self._states[state.session_id] = state
        self._persist(state)

    def delete(self, session_id: str) -> None:
        with self._registry:
            self._states.pop(session_id, None)
            self._locks.pop(session_id, None)
        path = self._path(session_id)
        if path is not None and path.exists():
            path.unlink()

    def _persist(self, state: DialogState) -> None:
        path = self._path(state.session_id)
        if path is not None:
            path.write_text(state.to_json())


def _state_view(state: DialogState, response: str = "") -> dict:
    return {
        "session_id": state.session_id,
        "response": response,
        "fsm_state": state.fsm,
        "slots": {name: state.slots.get(name) for name in SLOT_NAMES},
        "justification": state.last_justification,
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="kdnlu dialog service")
    store = SessionStore(config.session_dir)
    app.state.store = store

    @app.middleware("http")
    async def request_logging(request: Request, call_next):
        t0 = time.perf_counter()
        response = await call_next(request)
        log.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - t0) * 1000,
        )
        return response

    @app.post("/api/session")
    def create_session():
        state = store.create()
        return {"session_id": state.session_id, "fsm_state": state.fsm}

    def _locked_turn(session_id: str, text: str) -> dict:
        try:
            lock = store.lock(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        if not lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="turn already in flight")
        try:
            if config.turn_delay:
                time.sleep(config.turn_delay)
            state = store.get(session_id)
            if config.synthesize_results and state.api_called and not state.kb_facts:
                state = state.with_fact_lines(_synthetic_restaurants(state))
            try:
                response, state = next_turn(state, text)
            except KdnluError as e:
                raise HTTPException(status_code=400, detail=str(e))
            store.update(state)
            return _state_view(state, response)
        finally:
            lock.release()

    @app.post("/api/session/{session_id}/turn")
    async def take_turn(session_id: str, request: Request):
        from starlette.concurrency import run_in_threadpool

        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="body must be JSON")
        if not isinstance(body, dict) or not isinstance(body.get("text"), str) or not body["text"].strip():
            raise HTTPException(status_code=400, detail="body needs a non-empty 'text'")
        return await run_in_threadpool(_locked_turn, session_id, body["text"])

    @app.get("/api/session/{session_id}/history")
    def history(session_id: str):
        try:
            state = store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return {"session_id": session_id, "history": list(state.history)}

    @app.delete("/api/session/{session_id}")
    def delete_session(session_id: str):
        try:
            store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        store.delete(session_id)
        return JSONResponse({"deleted": session_id})

    static = config.static_dir
    if static is not None and Path(static).is_dir():
        app.mount("/", StaticFiles(directory=str(static), html=True), name="ui")

    return app


def serve_http(
    port: int = 8000,
    host: str = "127.0.0.1",
    config: ServiceConfig | None = None,
) -> None:
    import uvicorn

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
