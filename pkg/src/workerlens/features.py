"""Feature engineering: piece-level and session-level matrices.

Column naming contract (shared with selection, explanation and report
rendering): base features are "f02".."f15"; vector statistics carry the
suffixes "(avg)", "(q1)", "(q2)", "(q3)".

Scenario 1 (piece profiling) trains on [f02, f03, f04] = input instant,
output delay, time between pieces; piece id and validity ride along as
metadata.  Scenario 2 (session profiling) has 35 columns in the full
stage (id + 5 vectors + 9 scalars + 20 stats) and 29 numeric columns in
the selectable stage (scalars f04..f11 and f15, then the 20 stats).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .events import ExpertiseLabel, FeatureMatrix, PieceEvent, SessionRecord, validate_session


class EmptyVector(ValueError):
    """Statistics were requested for an empty vector."""


class InconsistentSession(ValueError):
    """A session record failed validation on its way into a matrix."""


@dataclass(frozen=True)
class VectorStats:
    """Mean and linear-interpolation quartiles of a numeric vector."""

    avg: float
    q1: float
    q2: float
    q3: float


STAT_SUFFIXES = ("avg", "q1", "q2", "q3")

# scenario-2 vector features that expand into stats, in column order
VECTOR_FEATURES = ("f02", "f03", "f12", "f13", "f14")
SCALAR_FEATURES = ("f04", "f05", "f06", "f07", "f08", "f09", "f10", "f11", "f15")

PIECE_COLUMNS = ["f02", "f03", "f04"]


def quartiles(xs) -> VectorStats:
    """Arithmetic mean plus quartiles at positions p*(n-1), linearly interpolated."""
    arr = np.asarray(xs, dtype=np.float64)
    if arr.size == 0:
        raise EmptyVector("cannot compute statistics of an empty vector")
    q1, q2, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return VectorStats(avg=float(np.mean(arr)), q1=float(q1), q2=float(q2), q3=float(q3))


def stat_columns() -> list[str]:
    return [f"{f}({s})" for f in VECTOR_FEATURES for s in STAT_SUFFIXES]


def selectable_columns() -> list[str]:
    return list(SCALAR_FEATURES) + stat_columns()


def piece_matrix(pieces: list[PieceEvent],
                 labels: dict[str, ExpertiseLabel] | None = None) -> FeatureMatrix:
    """Scenario-1 matrix: one row per piece, columns [f02, f03, f04].

    `labels` maps worker id to expertise; when given, every piece's worker
    must be present and the matrix comes out labeled.
    """
    rows = np.empty((len(pieces), 3), dtype=np.float64)
    for i, p in enumerate(pieces):
        rows[i, 0] = p.input_instant
        rows[i, 1] = p.output_delay
        rows[i, 2] = p.time_between_pieces
    y = None
    if labels is not None:
        y = np.array([labels[p.worker_id].code for p in pieces], dtype=np.int64)
    return FeatureMatrix(
        columns=list(PIECE_COLUMNS),
        rows=rows,
        labels=y,
        ids=[p.piece_id for p in pieces],
        meta={
            "valid": [p.valid for p in pieces],
            "session_id": [p.session_id for p in pieces],
            "worker_id": [p.worker_id for p in pieces],
        },
    )


def session_vectors(record: SessionRecord) -> dict[str, list[float]]:
    """The five vector features of a session, booleans mapped to {0, 1}."""
    return {
        "f02": [float(v) for v in record.input_instants],
        "f03": [float(v) for v in record.output_delays],
        "f12": [1.0 if t else 0.0 for t in record.piece_types],
        "f13": [float(v) for v in record.time_between_pieces],
        "f14": [float(v) for v in record.time_between_valid],
    }


def session_stats(record: SessionRecord) -> dict[str, VectorStats]:
    """Stats of each vector feature.

    An empty inter-valid vector (fewer than 2 valid pieces) is imputed with
    the session total time in every field: no observed gap, bounded above
    by the whole session.  Keeps matrices NaN-free and penalizes low-valid
    sessions monotonically.
    """
    vectors = session_vectors(record)
    out = {}
    for name, vec in vectors.items():
        if name == "f14" and len(vec) == 0:
            t = float(record.total_time)
            out[name] = VectorStats(avg=t, q1=t, q2=t, q3=t)
        else:
            out[name] = quartiles(vec)
    return out


def _scalar_values(record: SessionRecord) -> dict[str, float]:
    return {
        "f04": float(record.n_incidences),
        "f05": float(record.n_invalid),
        "f06": float(record.n_valid),
        "f07": float(record.n_direct_placed),
        "f08": float(record.n_from_tray),
        "f09": float(record.n_to_buffer),
        "f10": float(record.n_reloads),
        "f11": float(record.n_assistant_reboots),
        "f15": float(record.total_time),
    }


def session_matrix(sessions: list[SessionRecord], stage: str = "selectable") -> FeatureMatrix:
    """Scenario-2 matrix over validated sessions.

    stage="selectable": the 29 numeric columns that feed selection and
    learning.  stage="full": same numeric columns plus the session id and
    the five raw vectors as metadata columns (35 columns in total).
    """
    if stage not in ("full", "selectable"):
        raise ValueError(f"unknown stage {stage!r}")
    for rec in sessions:
        violations = validate_session(rec)
        if violations:
            raise InconsistentSession(f"session {rec.session_id}: " + "; ".join(violations))

    columns = selectable_columns()
    rows = np.empty((len(sessions), len(columns)), dtype=np.float64)
    labels = []
    for i, rec in enumerate(sessions):
        scalars = _scalar_values(rec)
        stats = session_stats(rec)
        values = dict(scalars)
        for name, st in stats.items():
            values[f"{name}(avg)"] = st.avg
            values[f"{name}(q1)"] = st.q1
            values[f"{name}(q2)"] = st.q2
            values[f"{name}(q3)"] = st.q3
        rows[i] = [values[c] for c in columns]
        labels.append(rec.label.code if rec.label is not None else -1)

    y = np.array(labels, dtype=np.int64)
    labeled = None if (y < 0).any() or len(sessions) == 0 else y
    meta = {}
    if stage == "full":
        meta["f01"] = [rec.session_id for rec in sessions]
        for name in VECTOR_FEATURES:
            meta[name] = [session_vectors(rec)[name] for rec in sessions]
    return FeatureMatrix(
        columns=columns,
        rows=rows,
        labels=labeled,
        ids=[rec.session_id for rec in sessions],
        meta=meta,
    )


def post_selection_matrix(matrix: FeatureMatrix, selected) -> FeatureMatrix:
    """Project `matrix` onto the selected columns (training order preserved)."""
    from .events import UnknownColumn

    unknown = set(selected) - set(matrix.columns)
    if unknown:
        raise UnknownColumn(", ".join(sorted(unknown)))
    ordered = [c for c in matrix.columns if c in set(selected)]
    return matrix.project(ordered)


def data_value_count(matrix: FeatureMatrix) -> int:
    """Rows x (features + target): the dataset size convention used in docs."""
    width = matrix.width + (1 if matrix.labels is not None else 0)
    return matrix.n_rows * width
