import numpy as np
import pytest

from workerlens.events import FeatureMatrix
from workerlens.learn import (
    ClassTooSmall,
    EvalReport,
    ModelSpec,
    confusion_matrix,
    evaluate,
    metrics_from_confusion,
    stratified_kfold,
)

from conftest import blobs


def test_folds_exact_stratification_20_10():
    labels = np.r_[np.zeros(20, dtype=np.int64), np.ones(10, dtype=np.int64)]
    folds = stratified_kfold(labels, k=10, seed=0)
    assert len(folds) == 10
    for _, test_idx in folds:
        assert (labels[test_idx] == 0).sum() == 2
        assert (labels[test_idx] == 1).sum() == 1


def test_folds_disjoint_exhaustive_deterministic():
    rng = np.random.default_rng(41)
    labels = rng.integers(0, 2, 57).astype(np.int64)
    while min(np.bincount(labels)) < 5:
        labels = rng.integers(0, 2, 57).astype(np.int64)
    folds = stratified_kfold(labels, k=5, seed=9)
    seen = np.concatenate([t for _, t in folds])
    assert sorted(seen.tolist()) == list(range(57))
    for train_idx, test_idx in folds:
        assert set(train_idx) | set(test_idx) == set(range(57))
        assert not set(train_idx) & set(test_idx)
        # per-fold class counts within 1 of proportional
        for cls in (0, 1):
            expected = (labels == cls).sum() / 5
            assert abs((labels[test_idx] == cls).sum() - expected) <= 1
    again = stratified_kfold(labels, k=5, seed=9)
    for (a, b), (c, d) in zip(folds, again):
        assert (a == c).all() and (b == d).all()


def test_leave_one_out_on_balanced_data():
    labels = np.array([0, 1] * 5, dtype=np.int64)
    folds = stratified_kfold(labels, k=10, seed=0)
    sizes = sorted(len(t) for _, t in folds)
    assert sizes == [1] * 10


def test_class_too_small():
    labels = np.r_[np.zeros(20, dtype=np.int64), np.ones(5, dtype=np.int64)]
    with pytest.raises(ClassTooSmall):
        stratified_kfold(labels, k=10, seed=0)


def test_metrics_hand_computed_pooled_matrix():
    # actual inexpert: 8 predicted inexpert, 2 predicted expert;
    # actual expert: 1 predicted inexpert, 19 predicted expert
    cm = np.array([[19, 1], [2, 8]])
    report = metrics_from_confusion(cm)
    inexp = report.per_class["inexpert"]
    assert inexp.precision == pytest.approx(8 / 9)
    assert inexp.recall == pytest.approx(0.8)
    assert inexp.f1 == pytest.approx(2 * (8 / 9) * 0.8 / (8 / 9 + 0.8))
    assert report.accuracy == pytest.approx(27 / 30)
    assert report.macro.f1 == pytest.approx(
        (report.per_class["expert"].f1 + inexp.f1) / 2)


def test_constant_expert_predictor_pattern():
    y_true = np.r_[np.zeros(20, dtype=np.int64), np.ones(10, dtype=np.int64)]
    y_pred = np.zeros(30, dtype=np.int64)
    report = metrics_from_confusion(confusion_matrix(y_true, y_pred))
    assert report.accuracy == pytest.approx(2 / 3)
    assert report.per_class["inexpert"].recall == 0.0
    assert report.per_class["inexpert"].precision == 0.0


def test_metrics_match_brute_force_on_random_sets():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(2, 200))
        y_true = rng.integers(0, 2, n)
        y_pred = rng.integers(0, 2, n)
        cm = confusion_matrix(y_true, y_pred)
        report = metrics_from_confusion(cm)
        # independent integer-count arithmetic
        acc = sum(int(t == p) for t, p in zip(y_true, y_pred)) / n
        assert report.accuracy == acc
        for code, name in ((0, "expert"), (1, "inexpert")):
            tp = sum(1 for t, p in zip(y_true, y_pred) if t == code and p == code)
            fp = sum(1 for t, p in zip(y_true, y_pred) if t != code and p == code)
            fn = sum(1 for t, p in zip(y_true, y_pred) if t == code and p != code)
            prec = tp / (tp + fp) if tp + fp else 0.0
            rec = tp / (tp + fn) if tp + fn else 0.0
            f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
            m = report.per_class[name]
            assert (m.precision, m.recall, m.f1) == (prec, rec, f1)
        assert int(np.asarray(report.confusion).sum()) == n


def test_evaluate_perfect_classifier_end_to_end():
    X, y = blobs(n_per_class=20, gap=6.0, sd=0.4, seed=43)
    fm = FeatureMatrix(columns=["a", "b"], rows=X, labels=y)
    report = evaluate(ModelSpec("random_forest", seed=0), fm, k=10)
    assert report.accuracy == 1.0
    for m in report.per_class.values():
        assert m.precision == m.recall == m.f1 == 1.0
    assert report.total_time_s > 0
    assert report.n_samples == 40
    # report serialization round trip
    assert EvalReport.from_doc(report.to_doc()).to_doc() == report.to_doc()


def test_model_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec("nonsense")
    with pytest.raises(ValueError):
        ModelSpec("adaboost", {"bogus_param": 3})
    spec = ModelSpec("svc_rbf", {"C": 2.0}, seed=7)
    assert spec.resolved()["C"] == 2.0
    assert ModelSpec.from_doc(spec.to_doc()) == spec
