"""Service API: instruction endpoint, per-cycle snapshot stream over a
websocket, control endpoints, and static serving of the dashboard."""

from __future__ import annotations

import asyncio
import json
from contextlib import asynccontextmanager
from pathlib import Path
from typing import List, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .grounding.kernel import SimulatedKernel
from .grounding.world import ScenarioError, load_scenario_file
from .script import Session

_FALLBACK_PAGE = """<!doctype html>
<title>alia</title>
<h1>alia engine</h1>
<p>No dashboard bundle found. Build it with <code>npm run build</code> in
<code>frontend/</code>, or talk to the API directly:
<code>POST /api/instruction</code>, <code>GET /api/state</code>,
<code>WS /api/stream</code>.</p>"""


class EngineService:
    """Single engine execution context; network handlers communicate with
    it only through queues and the broadcast channel."""

    def __init__(self, session: Session, *, start_paused: bool = False,
                 rate: Optional[float] = None):
        self.session = session
        self.engine = session.engine
        self.paused = start_paused
        self.step_budget = 0
        self.rate = rate if rate is not None else self.engine.cfg.cycle_rate
        self.subscribers: List[asyncio.Queue] = []
        self.latest_json: str = json.dumps({"type": "snapshot",
                                            "data": self.engine.snapshot()})
        self._task: Optional[asyncio.Task] = None
        self._stop = False

    # -------------------------------------------------------- lifecycle

    async def run(self) -> None:
        try:
            while not self._stop:
                if self.paused and self.step_budget <= 0:
                    await asyncio.sleep(0.01)
                    continue
                if self.step_budget > 0:
                    self.step_budget -= 1
                self.engine.run_cycle()
                self.broadcast()
                delay = 1.0 / self.rate if self.rate > 0 else 0.0
                await asyncio.sleep(delay)
        except asyncio.CancelledError:
            pass

    def broadcast(self) -> None:
        self.latest_json = json.dumps({"type": "snapshot",
                                       "data": self.engine.snapshot()})
        for q in list(self.subscribers):
            q.put_nowait(self.latest_json)

    def subscribe(self) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue()
        self.subscribers.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        if q in self.subscribers:
            self.subscribers.remove(q)

    # -------------------------------------------------------- controls

    def control(self, action: str, value=None) -> dict:
        if action == "pause":
            self.paused = True
        elif action == "resume":
            self.paused = False
        elif action == "step":
            self.paused = True
            self.step_budget += int(value or 1)
        elif action == "seed":
            self.engine.seed = int(value)
            self.engine.rng.seed(int(value))
        elif action == "load-scenario":
            cfg = self.engine.cfg
            try:
                world = load_scenario_file(Path(str(value)), cfg)
            except (OSError, ScenarioError) as exc:
                return {"status": "error", "reason": str(exc)}
            self.engine.world = world
            self.engine.kernel = SimulatedKernel(world, cfg, self.engine.names)
            self.engine.director.kernel = self.engine.kernel
        else:
            return {"status": "error", "reason": f"unknown action {action!r}"}
        return {"status": "ok", "action": action,
                "paused": self.paused, "cycle": self.engine.cycle}


def build_app(session: Session, *, start_paused: bool = False,
              rate: Optional[float] = None,
              static_dir: Optional[Path] = None) -> FastAPI:
    service = EngineService(session, start_paused=start_paused, rate=rate)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        service._task = asyncio.ensure_future(service.run())
        yield
        service._stop = True
        if service._task:
            service._task.cancel()

    app = FastAPI(title="alia", lifespan=lifespan)
    app.state.service = service

    @app.post("/api/instruction")
    async def instruction(body: dict):
        text = body.get("text", "")
        if not isinstance(text, str) or not text.strip():
            return JSONResponse({"status": "error",
                                 "reason": "missing instruction text"},
                                status_code=400)
        return service.engine.instruct(text)

    @app.get("/api/state")
    async def state():
        return JSONResponse(content=json.loads(service.latest_json)["data"])

    @app.post("/api/control")
    async def control(body: dict):
        action = body.get("action", "")
        out = service.control(action, body.get("value"))
        if out.get("status") == "error":
            return JSONResponse(out, status_code=400)
        return out

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        q = service.subscribe()
        try:
            await ws.send_text(json.dumps(
                {"type": "hello",
                 "data": json.loads(service.latest_json)["data"]}))
            while True:
                msg = await q.get()
                await ws.send_text(msg)
        except WebSocketDisconnect:
            pass
        finally:
            service.unsubscribe(q)

    root = static_dir if static_dir is not None else _default_static_dir()
    if root is not None and root.is_dir():
        app.mount("/", StaticFiles(directory=str(root), html=True), name="ui")
    else:
        @app.get("/")
        async def index():
            return HTMLResponse(_FALLBACK_PAGE)

    return app


def _default_static_dir() -> Optional[Path]:
    here = Path(__file__).resolve()
    for base in [here.parents[2] / "frontend" / "dist",
                 here.parents[1] / "frontend" / "dist"]:
        if base.is_dir():
            return base
    return None


def serve(session: Session, port: int, *, host: str = "127.0.0.1",
          start_paused: bool = False) -> None:
    import uvicorn
    app = build_app(session, start_paused=start_paused)
    uvicorn.run(app, host=host, port=port, log_level="warning")
