"""Shared pipeline operations behind both the CLI and the HTTP service."""

from __future__ import annotations

import datetime as dt

import numpy as np

from .events import ExpertiseLabel, FeatureMatrix
from .explain import TrainStats, explain_instance
from .features import piece_matrix, post_selection_matrix, session_matrix
from .kpi import daily_kpis, inter_baseline, intra_baseline, verdict
from .learn import build_model, evaluate
from .registry import ModelRegistry, ModelRegistryEntry
from .reports import render_piece_report, render_session_report
from .selection import select
from .store import EventStore, TimeWindow, day_of, normalize_piece, normalize_session

# "exceeds 66.67%": the published threshold, compared strictly
VALID_RATIO_THRESHOLD = 0.6667


class PipelineError(ValueError):
    code = "pipeline_error"


class NoTrainingData(PipelineError):
    code = "no_training_data"


class EmptySelection(PipelineError):
    code = "empty_selection"


class NoModel(PipelineError):
    code = "no_model"


class NotFound(PipelineError):
    code = "not_found"


def build_matrix(store: EventStore, scenario: int,
                 window: TimeWindow | None = None) -> FeatureMatrix:
    """Labeled feature matrix for a scenario from stored records."""
    if scenario == 1:
        pieces = store.query("pieces", window)
        labels = store.label_by_worker()
        pieces = [p for p in pieces if p.worker_id in labels]
        if not pieces:
            raise NoTrainingData("no labeled pieces in the window")
        return piece_matrix(pieces, labels)
    if scenario == 2:
        sessions = [s for s in store.query("sessions", window) if s.label is not None]
        if not sessions:
            raise NoTrainingData("no labeled sessions in the window")
        return session_matrix(sessions)
    raise PipelineError(f"scenario must be 1 or 2, got {scenario}")


def train_and_register(store: EventStore, registry: ModelRegistry, scenario: int,
                       spec, window: TimeWindow | None = None, delta: float = 0.2,
                       k: int = 10) -> ModelRegistryEntry:
    """Feature engineering -> selection -> CV evaluation -> final fit -> registry."""
    if not 0.0 <= delta < 1.0:
        raise PipelineError(f"delta must lie in [0, 1), got {delta}")
    matrix = build_matrix(store, scenario, window)
    report = select(matrix, delta=delta, seed=spec.seed)
    if not report.final:
        raise EmptySelection("both selection methods agreed on no feature")
    projected = post_selection_matrix(matrix, report.final)
    eval_report = evaluate(spec, projected, k=k)
    model = build_model(spec)
    model.fit(projected.rows, projected.labels)
    return registry.add(
        scenario=scenario,
        spec=spec,
        selection=report.to_doc(),
        eval_report=eval_report.to_doc(),
        feature_names=projected.columns,
        train_stats=TrainStats.from_matrix(projected),
        model_doc=model.to_doc(),
    )


def _record_row(entry: ModelRegistryEntry, doc: dict):
    """Feature row for one raw record, in the entry's training feature order.

    Returns (row, normalized record).  Scenario 1 expects a piece
    document, scenario 2 a session document.
    """
    if entry.scenario == 1:
        piece = normalize_piece(doc)
        mat = piece_matrix([piece])
    else:
        record = normalize_session(doc)
        mat = session_matrix([record])
    projected = mat.project(entry.feature_names)
    normalized = piece if entry.scenario == 1 else record
    return projected.rows[0], normalized


def predict_record(entry: ModelRegistryEntry, doc: dict, model=None) -> dict:
    row, record = _record_row(entry, doc)
    model = model or entry.load_model()
    proba = model.predict_proba(row.reshape(1, -1))[0]
    code = int(np.argmax(proba))
    return {
        "record_id": record.piece_id if entry.scenario == 1 else record.session_id,
        "label": ExpertiseLabel.from_code(code).value,
        "confidence": float(proba[code]),
    }


def explain_record(store: EventStore, entry: ModelRegistryEntry, doc: dict,
                   seed: int = 0, n_samples: int = 500, top_k: int = 6,
                   model=None) -> dict:
    """Explanation plus the rendered report for one record."""
    row, record = _record_row(entry, doc)
    model = model or entry.load_model()
    record_id = record.piece_id if entry.scenario == 1 else record.session_id
    expl = explain_instance(model, row, entry.train_stats, n_samples=n_samples,
                            top_k=top_k, seed=seed, instance_id=record_id)
    if entry.scenario == 1:
        report = render_piece_report(expl, record.piece_id, record.worker_id)
    else:
        date = day_of(record.start_time)
        snapshot = daily_kpis(store, record.worker_id, date)
        v_intra = verdict(snapshot, intra_baseline(store, record.worker_id, date))
        v_inter = verdict(snapshot, inter_baseline(store, date, exclude=record.worker_id))
        report = render_session_report(expl, v_intra, v_inter,
                                       record.session_id, record.worker_id)
    return {"explanation": expl.to_doc(), "report": report}


def session_report(store: EventStore, registry: ModelRegistry, session_id: str,
                   model_id: str | None = None, seed: int = 0) -> dict:
    record = store.get_session(session_id)
    if record is None:
        raise NotFound(f"session {session_id} is not stored")
    entry = registry.get(model_id) if model_id else registry.latest(scenario=2)
    if entry is None:
        raise NoModel("no scenario-2 model registered")
    return explain_record(store, entry, record.to_doc(), seed=seed)


def kpi_payload(store: EventStore, worker: str, date: dt.date) -> dict:
    snapshot = daily_kpis(store, worker, date)
    intra = intra_baseline(store, worker, date)
    inter = inter_baseline(store, date, exclude=worker)
    return {
        "snapshot": snapshot.to_doc(),
        "intra": {"baseline": intra.to_doc(),
                  "verdict": verdict(snapshot, intra).to_doc()},
        "inter": {"baseline": inter.to_doc(),
                  "verdict": verdict(snapshot, inter).to_doc()},
    }


def valid_ratio(sessions) -> float:
    """Mean over tasks of n_valid / (n_invalid + n_valid)."""
    ratios = [s.n_valid / (s.n_invalid + s.n_valid)
              for s in sessions if s.n_invalid + s.n_valid > 0]
    return sum(ratios) / len(ratios) if ratios else 0.0


def dashboard_summary(store: EventStore, registry: ModelRegistry,
                      worker: str | None = None, date: dt.date | None = None,
                      window: TimeWindow | None = None,
                      model_id: str | None = None, seed: int = 0) -> dict:
    """Everything the dashboard renders in one payload.

    The timeline covers the (worker, window) filter; KPI boxes need a
    worker and default to the filter's last session day.  Box statuses
    take the intra verdict when it fired, otherwise the inter one.
    """
    entry = registry.get(model_id) if model_id else registry.latest(scenario=2)
    if entry is None:
        raise NoModel("no scenario-2 model registered")
    model = entry.load_model()
    sessions = store.query("sessions", window, worker)
    sessions.sort(key=lambda s: s.start_time)
    timeline = []
    for record in sessions:
        result = predict_record(entry, record.to_doc(), model=model)
        timeline.append({
            "session_id": record.session_id,
            "worker_id": record.worker_id,
            "start_time": record.start_time,
            "predicted": result["label"],
            "confidence": result["confidence"],
        })

    out = {
        "model_id": entry.model_id,
        "worker": worker,
        "timeline": timeline,
        "kpi_boxes": None,
        "feature_boxes": {},
        "valid_ratio": None,
        "date": None,
    }
    if sessions:
        f09 = [float(s.n_to_buffer) for s in sessions]
        delays = [sum(s.output_delays) / len(s.output_delays) for s in sessions]
        out["feature_boxes"] = {
            "f09": sum(f09) / len(f09),
            "f03(avg)": sum(delays) / len(delays),
        }
        ratio = valid_ratio(sessions)
        out["valid_ratio"] = {"ratio": ratio, "green": ratio > VALID_RATIO_THRESHOLD}
    if worker is not None:
        if date is None:
            worker_days = store.days(worker)
            date = dt.date.fromisoformat(worker_days[-1]) if worker_days else None
        if date is not None:
            payload = kpi_payload(store, worker, date)
            boxes = []
            for kpi in ("n_inc", "n_inv", "n_val", "n_task", "t_val", "t_total"):
                intra_status = payload["intra"]["verdict"][kpi]
                inter_status = payload["inter"]["verdict"][kpi]
                status = intra_status if intra_status != "neutral" else inter_status
                boxes.append({
                    "kpi": kpi,
                    "value": payload["snapshot"][kpi],
                    "status": status,
                    "status_intra": intra_status,
                    "status_inter": inter_status,
                })
            out["kpi_boxes"] = boxes
            out["date"] = date.isoformat()
    return out
