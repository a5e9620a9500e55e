import numpy as np
import pytest

from workerlens.events import ExpertiseLabel, SessionRecord
from workerlens.features import (
    EmptyVector,
    InconsistentSession,
    VectorStats,
    data_value_count,
    piece_matrix,
    post_selection_matrix,
    quartiles,
    selectable_columns,
    session_matrix,
    session_stats,
)

from conftest import make_piece_doc, make_session_doc
from workerlens.events import PieceEvent


def test_quartiles_singleton():
    st = quartiles([5])
    assert st == VectorStats(5.0, 5.0, 5.0, 5.0)


def test_quartiles_frozen_values():
    # hand evaluation of the p*(n-1) linear interpolation rule
    st = quartiles([1, 2, 3, 4])
    assert (st.avg, st.q1, st.q2, st.q3) == (2.5, 1.75, 2.5, 3.25)
    st = quartiles([3, 1, 2])
    assert (st.avg, st.q1, st.q2, st.q3) == (2.0, 1.5, 2.0, 2.5)


def test_quartiles_empty_rejected():
    with pytest.raises(EmptyVector):
        quartiles([])


def test_quartiles_permutation_and_shift_invariance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        xs = rng.normal(0, 5, int(rng.integers(1, 40)))
        st = quartiles(xs)
        perm = quartiles(rng.permutation(xs))
        for field in ("avg", "q1", "q2", "q3"):
            assert getattr(perm, field) == pytest.approx(getattr(st, field), abs=1e-12)
        c = float(rng.normal(0, 10))
        shifted = quartiles(xs + c)
        for field in ("avg", "q1", "q2", "q3"):
            assert getattr(shifted, field) == pytest.approx(getattr(st, field) + c, abs=1e-9)
        assert st.q1 <= st.q2 <= st.q3


def _pieces(n):
    out = []
    t = 0.0
    for i in range(n):
        out.append(PieceEvent(f"p{i}", "s1", "w1", t, 5.0, 0.0 if i == 0 else 2.0, True))
        t += 7.0
    return out


def test_piece_matrix_shape_and_metadata():
    pieces = _pieces(283)
    fm = piece_matrix(pieces)
    assert fm.columns == ["f02", "f03", "f04"]
    assert fm.rows.shape == (283, 3)
    assert fm.labels is None
    assert fm.meta["valid"][0] is True
    labeled = piece_matrix(pieces, {"w1": ExpertiseLabel.INEXPERT})
    assert labeled.labels.tolist() == [1] * 283


def test_piece_matrix_empty_and_first_piece():
    fm = piece_matrix([])
    assert fm.rows.shape == (0, 3)
    fm = piece_matrix(_pieces(1))
    assert fm.rows[0, 2] == 0.0


def test_session_matrix_column_counts():
    docs = [make_session_doc(session_id=f"s{i}", start=1000.0 * (i + 1)) for i in range(4)]
    sessions = [SessionRecord.from_doc(d) for d in docs]
    selectable = session_matrix(sessions, stage="selectable")
    assert selectable.width == 29
    assert selectable.total_columns == 29
    assert selectable.columns == selectable_columns()
    full = session_matrix(sessions, stage="full")
    assert full.width == 29
    assert full.total_columns == 35  # id + 5 vectors ride in meta
    assert set(full.meta) == {"f01", "f02", "f03", "f12", "f13", "f14"}


def test_all_valid_session_f12_stats_are_one():
    doc = make_session_doc(delays=(5.0, 5.0, 5.0), valid=(True, True, True))
    stats = session_stats(SessionRecord.from_doc(doc))
    st = stats["f12"]
    assert (st.avg, st.q1, st.q2, st.q3) == (1.0, 1.0, 1.0, 1.0)


def test_single_valid_session_f14_imputed_with_total_time():
    doc = make_session_doc(delays=(5.0, 6.0), valid=(True, False))
    record = SessionRecord.from_doc(doc)
    st = session_stats(record)["f14"]
    assert st.avg == st.q1 == st.q2 == st.q3 == record.total_time
    # matrices stay NaN-free
    fm = session_matrix([record])
    assert not np.isnan(fm.rows).any()


def test_session_matrix_rejects_invalid_session():
    doc = make_session_doc()
    doc["n_valid"] = 42
    record = SessionRecord.from_doc(doc)
    with pytest.raises(InconsistentSession):
        session_matrix([record])


def test_boolean_stats_within_unit_interval():
    docs = [make_session_doc(session_id=f"s{i}", start=1000.0 * (i + 1),
                             delays=(4.0, 5.0, 6.0), valid=(True, False, True))
            for i in range(3)]
    fm = session_matrix([SessionRecord.from_doc(d) for d in docs])
    for suffix in ("avg", "q1", "q2", "q3"):
        col = fm.column(f"f12({suffix})")
        assert ((0.0 <= col) & (col <= 1.0)).all()


def test_post_selection_data_value_counts():
    pieces = _pieces(283)
    fm = piece_matrix(pieces, {"w1": ExpertiseLabel.EXPERT})
    proj = post_selection_matrix(fm, {"f02", "f03"})
    assert proj.rows.shape == (283, 2)
    # 283 rows x (2 features + target) = 849 data values
    assert data_value_count(proj) == 849

    docs = [make_session_doc(session_id=f"s{i}", start=1000.0 * (i + 1)) for i in range(30)]
    sm = session_matrix([SessionRecord.from_doc(d) for d in docs])
    proj6 = post_selection_matrix(sm, set(sm.columns[:5]))
    assert data_value_count(proj6) == 30 * 6  # 180 with the target column

    identity = post_selection_matrix(sm, set(sm.columns))
    assert identity.columns == sm.columns
    assert (identity.rows == sm.rows).all()

    from workerlens.events import UnknownColumn
    with pytest.raises(UnknownColumn):
        post_selection_matrix(sm, {"f04", "not_a_column"})
