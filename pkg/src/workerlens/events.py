"""Canonical domain types: piece events, worker sessions, feature matrices.

Conventions fixed project-wide:

* class encoding: expert -> 0, inexpert -> 1 (all correlation signs and
  probability columns follow this encoding);
* timestamps are seconds with millisecond precision, durations non-negative;
* documents are flat key/value objects, snake_case keys as declared in
  ``PIECE_FIELDS`` / ``SESSION_FIELDS`` (vectors are allowed as values).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional

import numpy as np

# Task protocol: a session runs until 7 valid pieces, capped at 12 attempts.
MAX_VALID_PIECES = 7
MAX_ATTEMPTS = 12

_TIME_EPS = 1e-6  # slack for float sums when comparing durations


class ExpertiseLabel(Enum):
    EXPERT = "expert"
    INEXPERT = "inexpert"

    @property
    def code(self) -> int:
        return 0 if self is ExpertiseLabel.EXPERT else 1

    @classmethod
    def from_code(cls, code: int) -> "ExpertiseLabel":
        return cls.EXPERT if int(code) == 0 else cls.INEXPERT

    @classmethod
    def parse(cls, value) -> "ExpertiseLabel":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


def round_time(x: float) -> float:
    """Clamp a time value to millisecond precision."""
    return round(float(x), 3)


@dataclass(frozen=True)
class PieceEvent:
    """One finished piece: identity, timing and validity."""

    piece_id: str
    session_id: str
    worker_id: str
    input_instant: float
    output_delay: float
    time_between_pieces: float  # 0 for the first piece of a session
    valid: bool

    def to_doc(self) -> dict:
        return {
            "piece_id": self.piece_id,
            "session_id": self.session_id,
            "worker_id": self.worker_id,
            "input_instant": self.input_instant,
            "output_delay": self.output_delay,
            "time_between_pieces": self.time_between_pieces,
            "valid": self.valid,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "PieceEvent":
        return cls(
            piece_id=str(doc["piece_id"]),
            session_id=str(doc["session_id"]),
            worker_id=str(doc["worker_id"]),
            input_instant=round_time(doc["input_instant"]),
            output_delay=round_time(doc["output_delay"]),
            time_between_pieces=round_time(doc.get("time_between_pieces", 0.0)),
            valid=bool(doc["valid"]),
        )


@dataclass(frozen=True)
class SessionRecord:
    """One worker task: the piece sequence plus the 15 base session features.

    The piece vectors (ids, input instants, output delays, gaps, validity)
    are the canonical storage form; `pieces` reconstructs the constituent
    PieceEvents on demand.
    """

    session_id: str
    worker_id: str
    start_time: float
    piece_ids: tuple[str, ...]
    input_instants: tuple[float, ...]      # feature 2
    output_delays: tuple[float, ...]       # feature 3
    n_incidences: int                      # feature 4
    n_invalid: int                         # feature 5
    n_valid: int                           # feature 6
    n_direct_placed: int                   # feature 7
    n_from_tray: int                       # feature 8
    n_to_buffer: int                       # feature 9
    n_reloads: int                         # feature 10
    n_assistant_reboots: int               # feature 11
    piece_types: tuple[bool, ...]          # feature 12
    time_between_pieces: tuple[float, ...]  # feature 13
    time_between_valid: tuple[float, ...]   # feature 14
    total_time: float                      # feature 15
    label: Optional[ExpertiseLabel] = None

    @property
    def pieces(self) -> list[PieceEvent]:
        return [
            PieceEvent(
                piece_id=self.piece_ids[i],
                session_id=self.session_id,
                worker_id=self.worker_id,
                input_instant=self.input_instants[i],
                output_delay=self.output_delays[i],
                time_between_pieces=self.time_between_pieces[i],
                valid=self.piece_types[i],
            )
            for i in range(len(self.piece_ids))
        ]

    @property
    def n_pieces(self) -> int:
        return len(self.piece_ids)

    def to_doc(self) -> dict:
        doc = {
            "session_id": self.session_id,
            "worker_id": self.worker_id,
            "start_time": self.start_time,
            "piece_ids": list(self.piece_ids),
            "input_instants": list(self.input_instants),
            "output_delays": list(self.output_delays),
            "n_incidences": self.n_incidences,
            "n_invalid": self.n_invalid,
            "n_valid": self.n_valid,
            "n_direct_placed": self.n_direct_placed,
            "n_from_tray": self.n_from_tray,
            "n_to_buffer": self.n_to_buffer,
            "n_reloads": self.n_reloads,
            "n_assistant_reboots": self.n_assistant_reboots,
            "piece_types": list(self.piece_types),
            "time_between_pieces": list(self.time_between_pieces),
            "time_between_valid": list(self.time_between_valid),
            "total_time": self.total_time,
            "label": self.label.value if self.label is not None else None,
        }
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "SessionRecord":
        instants = tuple(round_time(v) for v in doc["input_instants"])
        start = doc.get("start_time")
        if start is None:
            start = instants[0] if instants else 0.0
        label = doc.get("label")
        return cls(
            session_id=str(doc["session_id"]),
            worker_id=str(doc["worker_id"]),
            start_time=round_time(start),
            piece_ids=tuple(str(p) for p in doc["piece_ids"]),
            input_instants=instants,
            output_delays=tuple(round_time(v) for v in doc["output_delays"]),
            n_incidences=int(doc["n_incidences"]),
            n_invalid=int(doc["n_invalid"]),
            n_valid=int(doc["n_valid"]),
            n_direct_placed=int(doc["n_direct_placed"]),
            n_from_tray=int(doc["n_from_tray"]),
            n_to_buffer=int(doc["n_to_buffer"]),
            n_reloads=int(doc["n_reloads"]),
            n_assistant_reboots=int(doc["n_assistant_reboots"]),
            piece_types=tuple(bool(v) for v in doc["piece_types"]),
            time_between_pieces=tuple(round_time(v) for v in doc["time_between_pieces"]),
            time_between_valid=tuple(round_time(v) for v in doc["time_between_valid"]),
            total_time=round_time(doc["total_time"]),
            label=ExpertiseLabel.parse(label) if label else None,
        )


# Field registries: (name, kind, required).  Kinds drive document validation
# and lossless CSV round-trips.  Column order is the canonical export order.
PIECE_FIELDS = [
    ("piece_id", "str", True),
    ("input_instant", "time", True),
    ("output_delay", "duration", True),
    ("time_between_pieces", "duration", False),
    ("valid", "bool", True),
    ("session_id", "str", True),
    ("worker_id", "str", True),
]

SESSION_FIELDS = [
    ("session_id", "str", True),
    ("input_instants", "vec_time", True),
    ("output_delays", "vec_duration", True),
    ("n_incidences", "count", True),
    ("n_invalid", "count", True),
    ("n_valid", "count", True),
    ("n_direct_placed", "count", True),
    ("n_from_tray", "count", True),
    ("n_to_buffer", "count", True),
    ("n_reloads", "count", True),
    ("n_assistant_reboots", "count", True),
    ("piece_types", "vec_bool", True),
    ("time_between_pieces", "vec_duration", True),
    ("time_between_valid", "vec_duration", True),
    ("total_time", "duration", True),
    ("worker_id", "str", True),
    ("start_time", "time", False),
    ("piece_ids", "vec_str", True),
    ("label", "label", False),
]


def validate_session(record: SessionRecord) -> list[str]:
    """Return violation descriptors for every broken SessionRecord invariant.

    An empty list means the record is consistent and protocol-conforming.
    Violations are data, not errors: each entry names the field and the rule.
    """
    out: list[str] = []
    n = record.n_pieces

    if not record.session_id:
        out.append("session_id must be non-empty")
    if not record.worker_id:
        out.append("worker_id must be non-empty")
    if n < 1:
        out.append("pieces: session must contain at least 1 piece")
    if n > MAX_ATTEMPTS:
        out.append(f"pieces: count {n} exceeds protocol maximum {MAX_ATTEMPTS}")
    if len(set(record.piece_ids)) != n:
        out.append("piece_ids: duplicate piece id within session")
    if any(not p for p in record.piece_ids):
        out.append("piece_ids: piece id must be non-empty")

    for name in ("input_instants", "output_delays", "piece_types", "time_between_pieces"):
        if len(getattr(record, name)) != n:
            out.append(f"{name}: length must equal piece count {n}")

    n_true = sum(1 for t in record.piece_types if t)
    if record.n_valid != n_true:
        out.append(f"n_valid mismatch: {record.n_valid} != {n_true} true piece_types")
    if record.n_invalid != n - n_true:
        out.append(f"n_invalid mismatch: {record.n_invalid} != {n - n_true} false piece_types")
    if record.n_valid > MAX_VALID_PIECES:
        out.append(f"n_valid exceeds protocol maximum {MAX_VALID_PIECES}")
    if record.n_valid + record.n_invalid > MAX_ATTEMPTS:
        out.append(f"n_valid + n_invalid exceeds protocol maximum {MAX_ATTEMPTS}")

    expected_tbv = max(record.n_valid - 1, 0)
    if len(record.time_between_valid) != expected_tbv:
        out.append(
            f"time_between_valid: length {len(record.time_between_valid)} != n_valid - 1 = {expected_tbv}"
        )

    for name in ("n_incidences", "n_invalid", "n_valid", "n_direct_placed",
                 "n_from_tray", "n_to_buffer", "n_reloads", "n_assistant_reboots"):
        if getattr(record, name) < 0:
            out.append(f"{name}: count must be >= 0")

    if any(d <= 0 for d in record.output_delays):
        out.append("output_delays: every delay must be > 0")
    if any(t < 0 for t in record.time_between_pieces):
        out.append("time_between_pieces: values must be >= 0")
    if any(t < 0 for t in record.time_between_valid):
        out.append("time_between_valid: values must be >= 0")
    if record.total_time < 0:
        out.append("total_time: must be >= 0")
    if record.total_time + _TIME_EPS < sum(record.output_delays):
        out.append("total_time: must be >= sum of output delays")

    inst = record.input_instants
    if any(inst[i] >= inst[i + 1] for i in range(len(inst) - 1)):
        out.append("input_instants: must be strictly increasing within session")

    return out


@dataclass
class FeatureMatrix:
    """A labeled numeric dataset with named columns.

    `rows` holds the training features only; identifier and vector-valued
    side columns live in `meta` (keyed by column name) and row identifiers
    in `ids`.  `labels` uses the expert=0 / inexpert=1 encoding.
    """

    columns: list[str]
    rows: np.ndarray
    labels: Optional[np.ndarray] = None
    ids: Optional[list[str]] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2:
            self.rows = self.rows.reshape(-1, len(self.columns))
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")
        if self.rows.shape[1] != len(self.columns):
            raise ValueError("row width must match column count")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape[0] != self.rows.shape[0]:
                raise ValueError("labels length must match row count")
        if np.isnan(self.rows).any():
            raise ValueError("feature matrix must be NaN-free")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    @property
    def total_columns(self) -> int:
        """Numeric columns plus identifier/vector side columns."""
        return self.width + len(self.meta)

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.columns.index(name)
        except ValueError:
            raise UnknownColumn(name) from None
        return self.rows[:, j]

    def project(self, selected) -> "FeatureMatrix":
        """Column-projected copy, preserving `selected` order, labels and ids."""
        missing = [c for c in selected if c not in self.columns]
        if missing:
            raise UnknownColumn(", ".join(missing))
        idx = [self.columns.index(c) for c in selected]
        return FeatureMatrix(
            columns=list(selected),
            rows=self.rows[:, idx].copy(),
            labels=None if self.labels is None else self.labels.copy(),
            ids=None if self.ids is None else list(self.ids),
            meta={},
        )


class UnknownColumn(KeyError):
    """A requested column name is not present in the matrix."""
