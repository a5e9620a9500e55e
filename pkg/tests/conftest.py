import numpy as np
import pytest

from workerlens.simulate import generate_corpus
from workerlens.store import EventStore


@pytest.fixture(scope="session")
def corpus_store(tmp_path_factory):
    """Seed-0 default corpus, shared read-only across the suite."""
    root = tmp_path_factory.mktemp("corpus")
    store = EventStore(root)
    generate_corpus(store, seed=0)
    return store


@pytest.fixture()
def fresh_store(tmp_path):
    return EventStore(tmp_path / "store")


def make_session_doc(session_id="s1", worker_id="w1", start=1000.0,
                     delays=(5.0, 6.0, 7.0), valid=(True, True, False),
                     label="expert", **overrides):
    """Hand-rolled consistent session document for store/feature tests."""
    n = len(delays)
    instants = []
    gaps = []
    t = start + 3.0
    for i, d in enumerate(delays):
        if i > 0:
            gap = 2.0
            t = instants[-1] + delays[i - 1] + gap
            gaps.append(gap)
        else:
            gaps.append(0.0)
        instants.append(t)
    completions = [i + d for i, d in zip(instants, delays)]
    valid_completions = [c for c, ok in zip(completions, valid) if ok]
    tbv = [round(b - a, 3) for a, b in zip(valid_completions, valid_completions[1:])]
    n_valid = sum(valid)
    doc = {
        "session_id": session_id,
        "worker_id": worker_id,
        "start_time": start,
        "piece_ids": [f"{session_id}-p{i+1}" for i in range(n)],
        "input_instants": instants,
        "output_delays": list(delays),
        "n_incidences": 1,
        "n_invalid": n - n_valid,
        "n_valid": n_valid,
        "n_direct_placed": 1,
        "n_from_tray": n,
        "n_to_buffer": n - 1,
        "n_reloads": 0,
        "n_assistant_reboots": 0,
        "piece_types": list(valid),
        "time_between_pieces": gaps,
        "time_between_valid": tbv,
        "total_time": round(completions[-1] - start + 2.0, 3),
        "label": label,
    }
    doc.update(overrides)
    return doc


def make_piece_doc(piece_id="p1", session_id="s1", worker_id="w1",
                   input_instant=1003.0, output_delay=5.0,
                   time_between_pieces=0.0, valid=True):
    return {
        "piece_id": piece_id,
        "session_id": session_id,
        "worker_id": worker_id,
        "input_instant": input_instant,
        "output_delay": output_delay,
        "time_between_pieces": time_between_pieces,
        "valid": valid,
    }


def blobs(n_per_class=20, gap=4.0, sd=0.6, d=2, seed=0):
    """Two separable Gaussian blobs; labels 0/1."""
    rng = np.random.default_rng(seed)
    a = rng.normal(-gap / 2, sd, (n_per_class, d))
    b = rng.normal(gap / 2, sd, (n_per_class, d))
    X = np.vstack([a, b])
    y = np.r_[np.zeros(n_per_class, dtype=np.int64), np.ones(n_per_class, dtype=np.int64)]
    return X, y
