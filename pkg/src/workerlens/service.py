"""HTTP service exposing the full pipeline.

Routes (all JSON unless noted):

* ``POST /events/pieces`` / ``POST /events/sessions`` - ingest one document
  (201; 400 on schema violations; 409 on duplicate ids)
* ``GET /export?kind=&from=&to=`` - CSV download
* ``POST /train`` - {scenario, model, window?, delta?, k?} -> registry entry
* ``GET /models`` / ``GET /models/{id}/metrics``
* ``POST /models/{id}/predict`` - {record} -> label + confidence
* ``POST /models/{id}/explain`` - {record, seed?} -> explanation + report
* ``GET /reports/{session_id}`` - rendered 5-statement session report
* ``GET /kpis/{worker}?date=`` - snapshot + both baselines + verdicts
* ``GET /dashboard/summary?worker=&date=&from=&to=&model=`` - dashboard payload
* ``GET /health``

Writes go through one ingestion lock (single-writer store) and training
jobs run one at a time so their timing stays meaningful.  When a built
dashboard bundle is available its directory is served under ``/ui``.
"""

from __future__ import annotations

import datetime as dt
import io
import os
import threading

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import pipeline
from .events import UnknownColumn
from .features import EmptyVector, InconsistentSession
from .learn import ClassTooSmall, DegenerateWeakLearner, NonConvergence, ModelSpec, UnlabeledMatrix
from .registry import ModelRegistry, NoSuchModel
from .store import (
    DuplicateId,
    EventStore,
    IoFailure,
    MalformedDocument,
    SchemaViolation,
    StoreUnavailable,
    TimeWindow,
)

_STATUS = {
    MalformedDocument: 400,
    SchemaViolation: 400,
    DuplicateId: 409,
    StoreUnavailable: 503,
    IoFailure: 500,
    UnknownColumn: 400,
    InconsistentSession: 400,
    EmptyVector: 400,
    UnlabeledMatrix: 400,
    ClassTooSmall: 400,
    DegenerateWeakLearner: 400,
    NonConvergence: 500,
    NoSuchModel: 404,
    pipeline.NotFound: 404,
    pipeline.NoModel: 404,
    pipeline.NoTrainingData: 400,
    pipeline.EmptySelection: 400,
    pipeline.PipelineError: 400,
    ValueError: 400,
}


def _error_body(exc: Exception) -> dict:
    code = getattr(exc, "code", exc.__class__.__name__.lower())
    return {"code": code, "message": str(exc) or exc.__class__.__name__,
            "detail": exc.__class__.__name__}


def _window(from_, to) -> TimeWindow | None:
    if from_ is None and to is None:
        return None
    return TimeWindow(float(from_ if from_ is not None else -1e18),
                      float(to if to is not None else 1e18))


def default_ui_dir() -> str | None:
    candidate = os.environ.get("UI_DIST")
    if candidate:
        return candidate
    here = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    guess = os.path.join(here, "frontend", "dist")
    return guess if os.path.isdir(guess) else None


def create_app(store_root: str | None = None, ui_dir: str | None = None) -> FastAPI:
    root = store_root or os.environ.get("STORE_ROOT", "./data")
    app = FastAPI(title="workerlens", version="0.1.0")
    store = EventStore(root)
    registry = ModelRegistry(root)
    ingest_lock = threading.Lock()
    train_lock = threading.Lock()
    app.state.store = store
    app.state.registry = registry

    @app.exception_handler(Exception)
    async def on_error(request: Request, exc: Exception):
        for klass, status in _STATUS.items():
            if isinstance(exc, klass):
                return JSONResponse(status_code=status, content=_error_body(exc))
        return JSONResponse(status_code=500, content=_error_body(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(store.query("sessions")),
                "models": len(registry.list())}

    # -- ingestion ------------------------------------------------------

    @app.post("/events/pieces", status_code=201)
    def ingest_piece(doc: dict = Body(...)):
        with ingest_lock:
            event = store.ingest_piece(doc)
        return event.to_doc()

    @app.post("/events/sessions", status_code=201)
    def ingest_session(doc: dict = Body(...)):
        with ingest_lock:
            record = store.ingest_session(doc)
        return record.to_doc()

    # -- export ---------------------------------------------------------

    @app.get("/export")
    def export(kind: str = "pieces",
               from_: float | None = Query(None, alias="from"),
               to: float | None = None):
        import tempfile

        if kind not in ("pieces", "sessions"):
            raise ValueError("kind must be 'pieces' or 'sessions'")
        with tempfile.NamedTemporaryFile("w+", suffix=".csv", delete=False) as tmp:
            path = tmp.name
        try:
            store.export_csv(kind, _window(from_, to), path)
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        finally:
            os.unlink(path)
        return Response(content=text, media_type="text/csv")

    # -- training & models ----------------------------------------------

    @app.post("/train")
    def train(body: dict = Body(...)):
        scenario = int(body.get("scenario", 2))
        spec = ModelSpec.from_doc(body.get("model", {"family": "random_forest"}))
        delta = float(body.get("delta", 0.2))
        k = int(body.get("k", 10))
        win = body.get("window") or {}
        window = _window(win.get("start"), win.get("end")) if win else None
        with train_lock:
            entry = pipeline.train_and_register(store, registry, scenario, spec,
                                                window=window, delta=delta, k=k)
        return entry.to_doc()

    @app.get("/models")
    def models():
        return [entry.summary() for entry in registry.list()]

    @app.get("/models/{model_id}/metrics")
    def model_metrics(model_id: str):
        return registry.get(model_id).eval_report

    @app.post("/models/{model_id}/predict")
    def predict(model_id: str, body: dict = Body(...)):
        entry = registry.get(model_id)
        return pipeline.predict_record(entry, body.get("record", body))

    @app.post("/models/{model_id}/explain")
    def explain(model_id: str, body: dict = Body(...)):
        entry = registry.get(model_id)
        seed = int(body.get("seed", 0))
        return pipeline.explain_record(store, entry, body.get("record", body),
                                       seed=seed)

    @app.get("/reports/{session_id}")
    def report(session_id: str, model: str | None = None, seed: int = 0):
        return pipeline.session_report(store, registry, session_id,
                                       model_id=model, seed=seed)

    # -- KPIs & dashboard -------------------------------------------------

    @app.get("/kpis/{worker}")
    def kpis(worker: str, date: str):
        return pipeline.kpi_payload(store, worker, dt.date.fromisoformat(date))

    @app.get("/dashboard/summary")
    def summary(worker: str | None = None, date: str | None = None,
                from_: float | None = Query(None, alias="from"),
                to: float | None = None,
                model: str | None = None, seed: int = 0):
        return pipeline.dashboard_summary(
            store, registry,
            worker=worker or None,
            date=dt.date.fromisoformat(date) if date else None,
            window=_window(from_, to),
            model_id=model,
            seed=seed,
        )

    ui = ui_dir or default_ui_dir()
    if ui and os.path.isdir(ui):
        app.mount("/ui", StaticFiles(directory=ui, html=True), name="ui")

    return app
