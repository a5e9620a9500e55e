import numpy as np

from workerlens.events import ExpertiseLabel, validate_session
from workerlens.features import session_matrix
from workerlens.selection import pearson
from workerlens.simulate import (
    BehaviorProfile,
    default_profile,
    generate_corpus,
    simulate_session,
)
from workerlens.store import EventStore


def test_default_profile_orderings():
    exp = default_profile(ExpertiseLabel.EXPERT)
    inexp = default_profile(ExpertiseLabel.INEXPERT)
    assert exp.mean_output_delay < inexp.mean_output_delay
    assert exp.invalid_rate < inexp.invalid_rate
    assert exp.buffer_propensity > inexp.buffer_propensity
    assert BehaviorProfile.from_doc(exp.to_doc()) == exp


def test_simulated_sessions_conform_to_protocol():
    profile = default_profile(ExpertiseLabel.INEXPERT)
    for seed in range(10):
        record = simulate_session(profile, "w9", f"w9-s{seed}", 1000.0, seed)
        assert validate_session(record) == []
        assert record.n_valid <= 7
        assert record.n_pieces <= 12
        assert record.label is ExpertiseLabel.INEXPERT


def test_invalid_rate_edges():
    base = default_profile(ExpertiseLabel.EXPERT)
    always_valid = BehaviorProfile(**{**base.to_doc(), "level": base.level,
                                      "invalid_rate": 0.0})
    record = simulate_session(always_valid, "w", "s-a", 0.0, 1)
    assert record.n_pieces == 7 and record.n_valid == 7

    never_valid = BehaviorProfile(**{**base.to_doc(), "level": base.level,
                                     "invalid_rate": 1.0})
    record = simulate_session(never_valid, "w", "s-b", 0.0, 1)
    assert record.n_pieces == 12 and record.n_valid == 0
    assert validate_session(record) == []


def test_session_determinism():
    profile = default_profile(ExpertiseLabel.EXPERT)
    a = simulate_session(profile, "w", "s", 500.0, seed=42)
    b = simulate_session(profile, "w", "s", 500.0, seed=42)
    assert a == b
    c = simulate_session(profile, "w", "s", 500.0, seed=43)
    assert a != c


def test_corpus_counts_and_split(tmp_path):
    store = EventStore(tmp_path / "s")
    info = generate_corpus(store, seed=3)
    sessions = store.query("sessions")
    assert info["sessions"] == len(sessions) == 30
    labels = [s.label for s in sessions]
    assert labels.count(ExpertiseLabel.EXPERT) == 20
    assert labels.count(ExpertiseLabel.INEXPERT) == 10
    assert len(store.query("pieces")) == info["pieces"]
    assert 230 <= info["pieces"] <= 330
    for record in sessions:
        assert validate_session(record) == []


def test_corpus_determinism(tmp_path):
    a = EventStore(tmp_path / "a")
    b = EventStore(tmp_path / "b")
    generate_corpus(a, seed=11)
    generate_corpus(b, seed=11)
    assert [s.to_doc() for s in a.query("sessions")] == [s.to_doc() for s in b.query("sessions")]
    assert [p.to_doc() for p in a.query("pieces")] == [p.to_doc() for p in b.query("pieces")]


def test_zero_days_empty_store(tmp_path):
    store = EventStore(tmp_path / "s")
    info = generate_corpus(store, days=0, expert_sessions=0, inexpert_sessions=0, seed=0)
    assert info == {"sessions": 0, "pieces": 0, "workers": ["W01", "W02", "W03", "W04", "W05"]}
    assert store.query("sessions") == []


def test_separation_signal_present(tmp_path):
    # the pipeline must have signal to find on every seed
    for seed in range(5):
        store = EventStore(tmp_path / f"s{seed}")
        generate_corpus(store, seed=seed)
        fm = session_matrix(store.query("sessions"))
        y = fm.labels.astype(float)
        assert abs(pearson(fm.column("f09"), y)) > 0.5
        assert abs(pearson(fm.column("f03(avg)"), y)) > 0.5
