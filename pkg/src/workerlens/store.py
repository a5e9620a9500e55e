"""Append-only document store for piece and session events.

Layout under the store root:

* ``pieces.ndjson``   - one normalized piece document per line, UTF-8
* ``sessions.ndjson`` - one normalized session document per line
* ``index/offsets.json`` - cached (worker, day) index; rebuildable from the
  logs alone, so it may be deleted at any time

Records are immutable once appended.  A single writer appends (atomic at
record granularity, each line flushed); readers re-open the logs and never
observe partial records.
"""

from __future__ import annotations

import datetime as dt
import io
import json
import os
from dataclasses import dataclass

from .events import (
    PIECE_FIELDS,
    SESSION_FIELDS,
    ExpertiseLabel,
    PieceEvent,
    SessionRecord,
    round_time,
    validate_session,
)

EPOCH_UTC = dt.timezone.utc


class StoreError(Exception):
    """Base class for store failures."""

    code = "store_error"


class MalformedDocument(StoreError):
    code = "malformed_document"


class SchemaViolation(StoreError):
    code = "schema_violation"


class DuplicateId(StoreError):
    code = "duplicate_id"


class StoreUnavailable(StoreError):
    code = "store_unavailable"


class IoFailure(StoreError):
    code = "io_failure"


@dataclass(frozen=True)
class TimeWindow:
    start: float
    end: float

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("window start must be <= end")

    def contains(self, t: float) -> bool:
        return self.start <= t <= self.end  # boundary inclusive


def day_of(t: float) -> dt.date:
    """UTC calendar day of an epoch-relative timestamp."""
    return dt.datetime.fromtimestamp(t, tz=EPOCH_UTC).date()


def _check_scalar(doc: dict, name: str, kind: str, required: bool, errors: list):
    if name not in doc or doc[name] is None:
        if required:
            errors.append(f"{name}: required field missing")
        return
    v = doc[name]
    if kind == "str":
        if not isinstance(v, str) or not v:
            errors.append(f"{name}: must be a non-empty string")
    elif kind in ("time", "duration"):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            errors.append(f"{name}: must be a number")
        elif kind == "duration" and float(v) < 0:
            errors.append(f"{name}: must be >= 0")
    elif kind == "count":
        if isinstance(v, bool) or not isinstance(v, int):
            errors.append(f"{name}: must be an integer")
        elif v < 0:
            errors.append(f"{name}: must be >= 0")
    elif kind == "bool":
        if not isinstance(v, bool):
            errors.append(f"{name}: must be a boolean")
    elif kind == "label":
        if v not in ("expert", "inexpert"):
            errors.append(f"{name}: must be 'expert' or 'inexpert'")
    elif kind.startswith("vec_"):
        if not isinstance(v, list):
            errors.append(f"{name}: must be a list")
            return
        inner = kind[4:]
        for x in v:
            if inner in ("time", "duration") and (isinstance(x, bool) or not isinstance(x, (int, float))):
                errors.append(f"{name}: elements must be numbers")
                break
            if inner == "bool" and not isinstance(x, bool):
                errors.append(f"{name}: elements must be booleans")
                break
            if inner == "str" and (not isinstance(x, str) or not x):
                errors.append(f"{name}: elements must be non-empty strings")
                break


def normalize_piece(doc: dict) -> PieceEvent:
    """Validate and normalize a raw piece document."""
    if not isinstance(doc, dict):
        raise MalformedDocument("piece document must be a flat object")
    errors: list[str] = []
    for name, kind, required in PIECE_FIELDS:
        _check_scalar(doc, name, kind, required, errors)
    if not errors and float(doc["output_delay"]) <= 0:
        errors.append("output_delay: must be > 0")
    if errors:
        raise SchemaViolation("; ".join(errors))
    return PieceEvent.from_doc(doc)


def normalize_session(doc: dict) -> SessionRecord:
    """Validate and normalize a raw session document."""
    if not isinstance(doc, dict):
        raise MalformedDocument("session document must be a flat object")
    errors: list[str] = []
    for name, kind, required in SESSION_FIELDS:
        _check_scalar(doc, name, kind, required, errors)
    if errors:
        raise SchemaViolation("; ".join(errors))
    record = SessionRecord.from_doc(doc)
    violations = validate_session(record)
    if violations:
        raise SchemaViolation("; ".join(violations))
    return record


class EventStore:
    """Embedded append-only store with a (worker, day) offset index."""

    def __init__(self, root: str | os.PathLike):
        self.root = str(root)
        try:
            os.makedirs(self.root, exist_ok=True)
            os.makedirs(os.path.join(self.root, "index"), exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot open store root {self.root}: {exc}") from exc
        self._paths = {
            "pieces": os.path.join(self.root, "pieces.ndjson"),
            "sessions": os.path.join(self.root, "sessions.ndjson"),
        }
        self._writers: dict[str, io.TextIOWrapper] = {}
        self._index: dict[str, dict] = {}
        self._piece_ids: set[tuple[str, str]] = set()
        self._session_ids: set[str] = set()
        self._closed = False
        self._load()

    # -- lifecycle -------------------------------------------------------

    def _load(self):
        snap = self._read_snapshot()
        rebuilt = self._replay()
        if snap is not None and snap != rebuilt:
            # stale snapshot; the logs are authoritative
            self._write_snapshot(rebuilt)
        self._apply_index(rebuilt)

    def _replay(self) -> dict:
        data = {"pieces": [], "sessions": []}
        for kind, path in self._paths.items():
            if not os.path.exists(path):
                continue
            with open(path, "r", encoding="utf-8") as fh:
                offset = 0
                for line in fh:
                    if line.strip():
                        doc = json.loads(line)
                        data[kind].append(self._index_entry(kind, doc, offset))
                    offset += 1
        return data

    @staticmethod
    def _index_entry(kind: str, doc: dict, offset: int) -> dict:
        if kind == "pieces":
            t = doc["input_instant"]
            ids = (doc["session_id"], doc["piece_id"])
        else:
            t = doc.get("start_time", doc["input_instants"][0] if doc["input_instants"] else 0.0)
            ids = doc["session_id"]
        return {
            "offset": offset,
            "t": t,
            "worker": doc["worker_id"],
            "day": day_of(t).isoformat(),
            "ids": ids,
        }

    def _apply_index(self, data: dict):
        self._index = data
        self._piece_ids = {tuple(e["ids"]) for e in data["pieces"]}
        self._session_ids = {e["ids"] for e in data["sessions"]}

    def _read_snapshot(self):
        path = os.path.join(self.root, "index", "offsets.json")
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        for entries in raw.values():
            for e in entries:
                if isinstance(e.get("ids"), list):
                    e["ids"] = tuple(e["ids"])
        return raw

    def _write_snapshot(self, data: dict):
        path = os.path.join(self.root, "index", "offsets.json")
        serializable = {
            kind: [dict(e, ids=list(e["ids"]) if isinstance(e["ids"], tuple) else e["ids"])
                   for e in entries]
            for kind, entries in data.items()
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(serializable, fh)

    def close(self):
        for fh in self._writers.values():
            fh.close()
        self._writers.clear()
        if not self._closed:
            self._write_snapshot(self._index)
        self._closed = True

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _ensure_open(self):
        if self._closed:
            raise StoreUnavailable("store is closed")

    # -- ingestion -------------------------------------------------------

    def _append(self, kind: str, doc: dict) -> int:
        if kind not in self._writers:
            try:
                self._writers[kind] = open(self._paths[kind], "a", encoding="utf-8")
            except OSError as exc:
                raise IoFailure(str(exc)) from exc
        fh = self._writers[kind]
        offset = len(self._index[kind])
        try:
            fh.write(json.dumps(doc, separators=(",", ":")) + "\n")
            fh.flush()
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
        return offset

    def ingest_piece(self, doc) -> PieceEvent:
        """Normalize, append and index a raw piece document."""
        self._ensure_open()
        doc = _parse_raw(doc)
        event = normalize_piece(doc)
        key = (event.session_id, event.piece_id)
        if key in self._piece_ids:
            raise DuplicateId(f"piece {event.piece_id} already stored for session {event.session_id}")
        norm = event.to_doc()
        offset = self._append("pieces", norm)
        self._index["pieces"].append(self._index_entry("pieces", norm, offset))
        self._piece_ids.add(key)
        return event

    def ingest_session(self, doc) -> SessionRecord:
        """Normalize, append and index a raw session document."""
        self._ensure_open()
        doc = _parse_raw(doc)
        record = normalize_session(doc)
        if record.session_id in self._session_ids:
            raise DuplicateId(f"session {record.session_id} already stored")
        norm = record.to_doc()
        offset = self._append("sessions", norm)
        self._index["sessions"].append(self._index_entry("sessions", norm, offset))
        self._session_ids.add(record.session_id)
        return record

    # -- queries ---------------------------------------------------------

    def _read_all(self, kind: str) -> list[dict]:
        path = self._paths[kind]
        if not os.path.exists(path):
            return []
        with open(path, "r", encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def query(self, kind: str, window: TimeWindow | None = None,
              worker: str | None = None):
        """Records of `kind` whose timestamp falls in `window`, stored order.

        Pieces are selected by `input_instant`, sessions by their start time.
        """
        self._ensure_open()
        if kind not in self._paths:
            raise ValueError(f"unknown record kind {kind!r}")
        docs = self._read_all(kind)
        out = []
        for entry, doc in zip(self._index[kind], docs):
            if window is not None and not window.contains(entry["t"]):
                continue
            if worker is not None and entry["worker"] != worker:
                continue
            out.append(PieceEvent.from_doc(doc) if kind == "pieces" else SessionRecord.from_doc(doc))
        return out

    def workers(self) -> list[str]:
        seen = {}
        for kind in ("pieces", "sessions"):
            for e in self._index[kind]:
                seen.setdefault(e["worker"], None)
        return sorted(seen)

    def days(self, worker: str | None = None) -> list[str]:
        seen = set()
        for e in self._index["sessions"]:
            if worker is None or e["worker"] == worker:
                seen.add(e["day"])
        return sorted(seen)

    def sessions_on(self, worker: str, day: dt.date) -> list[SessionRecord]:
        key = day.isoformat()
        docs = self._read_all("sessions")
        return [
            SessionRecord.from_doc(docs[e["offset"]])
            for e in self._index["sessions"]
            if e["worker"] == worker and e["day"] == key
        ]

    def get_session(self, session_id: str) -> SessionRecord | None:
        for entry, doc in zip(self._index["sessions"], self._read_all("sessions")):
            if entry["ids"] == session_id:
                return SessionRecord.from_doc(doc)
        return None

    def time_range(self, kind: str = "sessions") -> TimeWindow | None:
        entries = self._index[kind]
        if not entries:
            return None
        ts = [e["t"] for e in entries]
        return TimeWindow(min(ts), max(ts))

    def label_by_worker(self) -> dict[str, ExpertiseLabel]:
        """Worker expertise labels as carried by stored session records."""
        out: dict[str, ExpertiseLabel] = {}
        for rec in self.query("sessions"):
            if rec.label is not None:
                out[rec.worker_id] = rec.label
        return out

    # -- CSV export / import ----------------------------------------------

    def export_csv(self, kind: str, window: TimeWindow | None, path: str) -> int:
        """Write selected records as CSV; returns the number of data rows.

        Dialect: comma delimiter, double-quote quoting (doubled inside
        fields), LF line endings.  Vector cells are JSON-encoded, so the
        file re-imports losslessly via `import_csv`.
        """
        records = self.query(kind, window)
        fields = PIECE_FIELDS if kind == "pieces" else SESSION_FIELDS
        import csv

        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, delimiter=",", quotechar='"',
                                    quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
                writer.writerow([name for name, _, _ in fields])
                for rec in records:
                    doc = rec.to_doc()
                    writer.writerow([_cell(doc.get(name), kind_) for name, kind_, _ in fields])
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
        return len(records)


def _cell(value, kind: str) -> str:
    if value is None:
        return ""
    if kind in ("str", "label"):
        return str(value)
    return json.dumps(value)


def _uncell(text: str, kind: str):
    if text == "":
        return None
    if kind in ("str", "label"):
        return text
    return json.loads(text)


def import_csv(path: str, kind: str) -> list[dict]:
    """Parse a CSV written by `EventStore.export_csv` back into documents."""
    import csv

    fields = PIECE_FIELDS if kind == "pieces" else SESSION_FIELDS
    kinds = {name: k for name, k, _ in fields}
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            doc = {name: _uncell(text, kinds[name]) for name, text in row.items()}
            out.append({k: v for k, v in doc.items() if v is not None})
    return out


def _parse_raw(doc):
    if isinstance(doc, (bytes, str)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"unparseable document: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("document must be a flat key-value object")
    return doc
