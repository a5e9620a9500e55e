import numpy as np
import pytest

from workerlens.events import (
    ExpertiseLabel,
    FeatureMatrix,
    PieceEvent,
    SessionRecord,
    UnknownColumn,
    validate_session,
)

from conftest import make_session_doc


def test_clean_session_has_no_violations():
    doc = make_session_doc(delays=(5.0,) * 9, valid=(True,) * 7 + (False,) * 2)
    record = SessionRecord.from_doc(doc)
    assert validate_session(record) == []


def test_too_many_valid_pieces_flagged():
    doc = make_session_doc(delays=(5.0,) * 8, valid=(True,) * 8)
    record = SessionRecord.from_doc(doc)
    assert any("n_valid exceeds protocol maximum 7" in v for v in validate_session(record))


def test_count_mismatch_flagged():
    doc = make_session_doc(delays=(5.0, 6.0), valid=(True, False))
    doc["n_valid"] = 2
    doc["n_invalid"] = 0
    record = SessionRecord.from_doc(doc)
    violations = validate_session(record)
    assert any("n_valid mismatch" in v for v in violations)
    assert any("n_invalid mismatch" in v for v in violations)


def test_nonpositive_delay_and_order_flagged():
    doc = make_session_doc(delays=(5.0, 6.0), valid=(True, True))
    doc["output_delays"] = [5.0, -1.0]
    doc["input_instants"] = [10.0, 9.0]
    violations = validate_session(SessionRecord.from_doc(doc))
    assert any("output_delays" in v for v in violations)
    assert any("strictly increasing" in v for v in violations)


def test_time_between_valid_length_rule():
    doc = make_session_doc(delays=(5.0, 6.0, 7.0), valid=(True, False, False))
    # one valid piece -> no inter-valid gaps
    assert doc["time_between_valid"] == []
    assert validate_session(SessionRecord.from_doc(doc)) == []
    doc["time_between_valid"] = [1.0]
    assert any("time_between_valid" in v
               for v in validate_session(SessionRecord.from_doc(doc)))


def test_piece_round_trip():
    event = PieceEvent("p1", "s1", "w1", 12.5, 4.25, 0.0, True)
    assert PieceEvent.from_doc(event.to_doc()) == event


def test_session_round_trip_and_pieces_view():
    doc = make_session_doc()
    record = SessionRecord.from_doc(doc)
    assert SessionRecord.from_doc(record.to_doc()) == record
    pieces = record.pieces
    assert [p.piece_id for p in pieces] == list(record.piece_ids)
    assert pieces[0].time_between_pieces == 0.0
    assert all(p.worker_id == record.worker_id for p in pieces)


def test_label_encoding_is_fixed():
    assert ExpertiseLabel.EXPERT.code == 0
    assert ExpertiseLabel.INEXPERT.code == 1
    assert ExpertiseLabel.from_code(1) is ExpertiseLabel.INEXPERT
    assert ExpertiseLabel.parse("Expert") is ExpertiseLabel.EXPERT


def test_feature_matrix_projection_and_errors():
    fm = FeatureMatrix(columns=["a", "b", "c"], rows=np.arange(12.0).reshape(4, 3),
                       labels=[0, 1, 0, 1], ids=["r1", "r2", "r3", "r4"])
    sub = fm.project(["c", "a"])
    assert sub.columns == ["c", "a"]
    assert sub.rows.shape == (4, 2)
    assert (sub.column("c") == fm.column("c")).all()
    with pytest.raises(UnknownColumn):
        fm.column("nope")
    with pytest.raises(ValueError):
        FeatureMatrix(columns=["a", "a"], rows=np.zeros((1, 2)))
    with pytest.raises(ValueError):
        FeatureMatrix(columns=["a"], rows=np.array([[np.nan]]))
