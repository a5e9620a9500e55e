"""Worker KPIs, baselines and expert/inexpert triggers.

Six per-worker-day KPIs: incidence count, invalid and valid piece counts,
task count, mean time between valid pieces, and mean session time.
Baselines carry {avg, q1, q3} per KPI, built either from the worker's own
trailing 7 days (intra) or from same-day peers (inter).  A trigger fires
only where the baseline is applicable: at least 3 contributing days or
peers and q1 < avg < q3 strictly for that KPI.

Trigger directions (all strict comparisons; ties are neutral):

================  =================  ==================
KPI               over (expert)      under (inexpert)
================  =================  ==================
n_inc             q1 > value         value > q3
n_inv             q1 > value         value > q3
n_val             q3 < value         value < q1
n_task            q3 < value         value < q1
t_val             q1 > value         value > q3
t_total           q1 > value         value > q3
================  =================  ==================
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from .features import quartiles
from .store import EventStore

KPI_NAMES = ("n_inc", "n_inv", "n_val", "n_task", "t_val", "t_total")

# KPIs where smaller values indicate better performance
LOWER_IS_BETTER = {"n_inc": True, "n_inv": True, "n_val": False,
                   "n_task": False, "t_val": True, "t_total": True}

MIN_CONTRIBUTING = 3  # quartiles of fewer points are degenerate

OVER = "over"
UNDER = "under"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class KpiSnapshot:
    worker_id: str
    date: dt.date
    n_inc: float
    n_inv: float
    n_val: float
    n_task: float
    t_val: float
    t_total: float
    empty: bool = False

    def value(self, kpi: str) -> float:
        return getattr(self, kpi)

    def to_doc(self):
        doc = {k: getattr(self, k) for k in KPI_NAMES}
        doc.update(worker_id=self.worker_id, date=self.date.isoformat(), empty=self.empty)
        return doc


@dataclass(frozen=True)
class BaselineEntry:
    avg: float
    q1: float
    q3: float
    applicable: bool

    def to_doc(self):
        return {"avg": self.avg, "q1": self.q1, "q3": self.q3,
                "applicable": self.applicable}


@dataclass
class KpiBaseline:
    window: str  # "intra_weekly" | "inter_daily"
    n_contributing: int
    entries: dict = field(default_factory=dict)

    def to_doc(self):
        return {
            "window": self.window,
            "n_contributing": self.n_contributing,
            "entries": {k: e.to_doc() for k, e in self.entries.items()},
        }


@dataclass
class KpiVerdict:
    statuses: dict  # kpi -> over | under | neutral

    def to_doc(self):
        return dict(self.statuses)


def daily_kpis(store: EventStore, worker: str, date: dt.date) -> KpiSnapshot:
    """Aggregate one worker's sessions for a calendar day.

    t_val and t_total are means over sessions (t_val over the sessions
    that observed at least one inter-valid gap).  A day without sessions
    yields an all-zero snapshot flagged empty.
    """
    sessions = store.sessions_on(worker, date)
    if not sessions:
        return KpiSnapshot(worker, date, 0, 0, 0, 0, 0.0, 0.0, empty=True)
    gap_means = [
        sum(s.time_between_valid) / len(s.time_between_valid)
        for s in sessions if s.time_between_valid
    ]
    return KpiSnapshot(
        worker_id=worker,
        date=date,
        n_inc=float(sum(s.n_incidences for s in sessions)),
        n_inv=float(sum(s.n_invalid for s in sessions)),
        n_val=float(sum(s.n_valid for s in sessions)),
        n_task=float(len(sessions)),
        t_val=sum(gap_means) / len(gap_means) if gap_means else 0.0,
        t_total=sum(s.total_time for s in sessions) / len(sessions),
    )


def _baseline_from(snapshots, window: str) -> KpiBaseline:
    n = len(snapshots)
    baseline = KpiBaseline(window=window, n_contributing=n)
    for kpi in KPI_NAMES:
        if n == 0:
            baseline.entries[kpi] = BaselineEntry(0.0, 0.0, 0.0, applicable=False)
            continue
        stats = quartiles([s.value(kpi) for s in snapshots])
        applicable = n >= MIN_CONTRIBUTING and stats.q1 < stats.avg < stats.q3
        baseline.entries[kpi] = BaselineEntry(stats.avg, stats.q1, stats.q3, applicable)
    return baseline


def intra_baseline(store: EventStore, worker: str, date: dt.date) -> KpiBaseline:
    """Stats over the worker's own daily snapshots for the 7 days before
    `date` (the day itself never contributes); empty days are skipped."""
    snapshots = []
    for back in range(7, 0, -1):
        snap = daily_kpis(store, worker, date - dt.timedelta(days=back))
        if not snap.empty:
            snapshots.append(snap)
    return _baseline_from(snapshots, "intra_weekly")


def inter_baseline(store: EventStore, date: dt.date, exclude: str) -> KpiBaseline:
    """Stats over other workers' snapshots for the same day."""
    snapshots = []
    for worker in store.workers():
        if worker == exclude:
            continue
        snap = daily_kpis(store, worker, date)
        if not snap.empty:
            snapshots.append(snap)
    return _baseline_from(snapshots, "inter_daily")


def verdict(snapshot: KpiSnapshot, baseline: KpiBaseline) -> KpiVerdict:
    """Per-KPI status against a baseline; see the trigger table above."""
    statuses = {}
    for kpi in KPI_NAMES:
        entry = baseline.entries.get(kpi)
        if entry is None or not entry.applicable:
            statuses[kpi] = NEUTRAL
            continue
        value = snapshot.value(kpi)
        if LOWER_IS_BETTER[kpi]:
            over = entry.q1 > value
            under = value > entry.q3
        else:
            over = entry.q3 < value
            under = value < entry.q1
        statuses[kpi] = OVER if over else UNDER if under else NEUTRAL
    return KpiVerdict(statuses)
