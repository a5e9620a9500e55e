"""Synthetic workstation corpus: seeded expert/inexpert workers.

Sessions follow the task protocol (run until 7 valid pieces, at most 12
attempts).  Expert and inexpert behavior profiles are calibrated so the
qualitative separations hold: experts place pieces faster, produce fewer
invalid pieces, and stage work through the buffer far more often.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, asdict

from . import rng as rngmod
from .events import (
    MAX_ATTEMPTS,
    MAX_VALID_PIECES,
    ExpertiseLabel,
    PieceEvent,
    SessionRecord,
    round_time,
)
from .store import EventStore

BASE_DATE = dt.date(2024, 1, 8)  # a Monday; corpus days run from here
DAY_START_S = 8 * 3600           # sessions begin at 08:00 UTC


@dataclass(frozen=True)
class BehaviorProfile:
    level: ExpertiseLabel
    mean_output_delay: float   # s
    delay_jitter: float        # s, piece-to-piece spread
    day_form_sd: float         # s, session-level drift of the delay mean
    invalid_rate: float        # probability a piece fails the quality check
    buffer_propensity: float   # share of pieces staged through the buffer
    incidence_rate: float      # expected incidences per session
    reload_rate: float         # expected material reloads per session
    assistant_reboot_rate: float
    inter_piece_gap: float     # s, mean idle time between pieces

    def to_doc(self):
        doc = asdict(self)
        doc["level"] = self.level.value
        return doc

    @classmethod
    def from_doc(cls, doc):
        doc = dict(doc)
        doc["level"] = ExpertiseLabel.parse(doc["level"])
        return cls(**doc)


_DEFAULTS = {
    ExpertiseLabel.EXPERT: BehaviorProfile(
        level=ExpertiseLabel.EXPERT,
        mean_output_delay=25.0,
        delay_jitter=4.0,
        day_form_sd=1.0,
        invalid_rate=0.15,
        buffer_propensity=0.8,
        incidence_rate=0.3,
        reload_rate=0.8,
        assistant_reboot_rate=0.05,
        inter_piece_gap=4.0,
    ),
    ExpertiseLabel.INEXPERT: BehaviorProfile(
        level=ExpertiseLabel.INEXPERT,
        mean_output_delay=40.0,
        delay_jitter=8.0,
        day_form_sd=1.5,
        invalid_rate=0.35,
        buffer_propensity=0.2,
        incidence_rate=1.2,
        reload_rate=1.5,
        assistant_reboot_rate=0.3,
        inter_piece_gap=5.5,
    ),
}


def default_profile(level: ExpertiseLabel) -> BehaviorProfile:
    return _DEFAULTS[level]


def _positive_normal(gen, mean, sd, minimum):
    """Normal draw truncated below by resampling; avoids non-positive times."""
    for _ in range(64):
        x = gen.normal(mean, sd)
        if x >= minimum:
            return x
    return minimum


def simulate_session(profile: BehaviorProfile, worker_id: str, session_id: str,
                     start_time: float, seed: int) -> SessionRecord:
    """One protocol-conforming session drawn from a behavior profile."""
    gen = rngmod.stream(seed, "session", session_id)
    # day form: the session's own drift of the worker's pace
    delay_mean = max(2.0, gen.normal(profile.mean_output_delay, profile.day_form_sd))
    t = start_time + gen.uniform(2.0, 8.0)  # consulting the instructions
    piece_ids = []
    instants = []
    delays = []
    gaps = []
    validity = []
    completions = []
    n_valid = 0
    while n_valid < MAX_VALID_PIECES and len(piece_ids) < MAX_ATTEMPTS:
        i = len(piece_ids)
        if i == 0:
            gap = 0.0
        else:
            gap = _positive_normal(gen, profile.inter_piece_gap,
                                   profile.inter_piece_gap * 0.5, 0.5)
            t = completions[-1] + gap
        delay = _positive_normal(gen, delay_mean, profile.delay_jitter, 1.0)
        valid = bool(gen.random() >= profile.invalid_rate)
        piece_ids.append(f"{session_id}-p{i + 1:02d}")
        instants.append(round_time(t))
        delays.append(round_time(delay))
        gaps.append(round_time(gap))
        validity.append(valid)
        completions.append(t + delay)
        if valid:
            n_valid += 1

    valid_completions = [c for c, ok in zip(completions, validity) if ok]
    tbv = [round_time(b - a) for a, b in zip(valid_completions, valid_completions[1:])]
    n = len(piece_ids)
    # staging through the buffer is a habit, not a coin flip: a fixed share
    # of the pieces handled, which keeps the behavior gap crisp
    n_buffer = int(round(n * profile.buffer_propensity))
    # session length includes non-production time (checks, registration)
    total = completions[-1] - start_time + gen.uniform(5.0, 25.0)
    return SessionRecord(
        session_id=session_id,
        worker_id=worker_id,
        start_time=round_time(start_time),
        piece_ids=tuple(piece_ids),
        input_instants=tuple(instants),
        output_delays=tuple(delays),
        n_incidences=int(gen.poisson(profile.incidence_rate)),
        n_invalid=n - n_valid,
        n_valid=n_valid,
        n_direct_placed=n - n_buffer,
        n_from_tray=n,
        n_to_buffer=n_buffer,
        n_reloads=int(gen.poisson(profile.reload_rate)),
        n_assistant_reboots=int(gen.poisson(profile.assistant_reboot_rate)),
        piece_types=tuple(validity),
        time_between_pieces=tuple(gaps),
        time_between_valid=tuple(tbv),
        total_time=round_time(total),
        label=profile.level,
    )


def _schedule(n_workers: int, days: int, total_sessions: int):
    """Sessions per (worker, day): one per slot, extras cycled round-robin."""
    counts = {}
    slots = [(d, w) for d in range(days) for w in range(n_workers)]
    if not slots:
        return counts
    for k in range(total_sessions):
        d, w = slots[k % len(slots)]
        counts[(w, d)] = counts.get((w, d), 0) + 1
    return counts


def generate_corpus(store: EventStore, n_expert_workers=3, n_inexpert_workers=2,
                    days=5, expert_sessions=20, inexpert_sessions=10, seed=0,
                    base_date: dt.date = BASE_DATE) -> dict:
    """Populate a store with a labeled corpus; deterministic per seed.

    Defaults mirror the desk-scale experiment: 5 workers over 5 days,
    30 sessions split 20 expert / 10 inexpert, around 280 pieces.
    Documents flow through the normal ingestion path.
    """
    workers = (
        [(f"W{i + 1:02d}", ExpertiseLabel.EXPERT) for i in range(n_expert_workers)]
        + [(f"W{n_expert_workers + i + 1:02d}", ExpertiseLabel.INEXPERT)
           for i in range(n_inexpert_workers)]
    )
    schedules = {
        ExpertiseLabel.EXPERT: _schedule(n_expert_workers, days, expert_sessions),
        ExpertiseLabel.INEXPERT: _schedule(n_inexpert_workers, days, inexpert_sessions),
    }
    epoch = dt.datetime.combine(base_date, dt.time(0), tzinfo=dt.timezone.utc).timestamp()
    n_sessions = 0
    n_pieces = 0
    session_seq = {w: 0 for w, _ in workers}
    for d in range(days):
        for li, (worker, level) in enumerate(workers):
            widx = li if level is ExpertiseLabel.EXPERT else li - n_expert_workers
            count = schedules[level].get((widx, d), 0)
            for k in range(count):
                session_seq[worker] += 1
                session_id = f"{worker}-s{session_seq[worker]:03d}"
                start = epoch + d * 86400 + DAY_START_S + li * 1200 + k * 7200
                record = simulate_session(default_profile(level), worker,
                                          session_id, start, seed)
                for piece in record.pieces:
                    store.ingest_piece(piece.to_doc())
                    n_pieces += 1
                store.ingest_session(record.to_doc())
                n_sessions += 1
    return {"sessions": n_sessions, "pieces": n_pieces,
            "workers": [w for w, _ in workers]}
