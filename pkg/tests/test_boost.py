import numpy as np
import pytest

from workerlens.learn import AdaBoost, DegenerateWeakLearner
from workerlens.learn.boost import ALPHA_CAP

from conftest import blobs


def test_stump_separable_converges_in_one_round():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    y = np.array([0, 0, 1, 1], dtype=np.int64)
    model = AdaBoost(n_rounds=50).fit(X, y)
    assert len(model.stumps) == 1
    assert model.alphas[0] == ALPHA_CAP
    assert (model.predict(X) == y).all()


def test_noisy_training_error_non_increasing():
    rng = np.random.default_rng(17)
    X = rng.uniform(-1, 1, (120, 1))
    y = (X[:, 0] > 0).astype(np.int64)
    flip = rng.random(120) < 0.1
    y[flip] = 1 - y[flip]
    model = AdaBoost(n_rounds=30).fit(X, y)
    curve = model.training_error_curve(X, y)
    assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))


def test_separable_2d_error_non_increasing_and_alphas_positive():
    X, y = blobs(n_per_class=25, seed=18)
    model = AdaBoost(n_rounds=25).fit(X, y)
    assert all(a > 0 for a in model.alphas)
    curve = model.training_error_curve(X, y)
    assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))
    assert curve[-1] == 0.0


def test_single_class_rejected():
    X = np.zeros((5, 1))
    y = np.zeros(5, dtype=np.int64)
    with pytest.raises(DegenerateWeakLearner):
        AdaBoost().fit(X, y)


def test_probabilities_follow_margin():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    y = np.array([0, 0, 1, 1], dtype=np.int64)
    model = AdaBoost().fit(X, y)
    proba = model.predict_proba(X)
    assert np.allclose(proba.sum(axis=1), 1.0)
    assert proba[0, 0] > 0.5 and proba[-1, 1] > 0.5
    margins = model.margin(X)
    assert (margins[:2] < 0).all() and (margins[2:] > 0).all()


def test_serialization_round_trip():
    X, y = blobs(seed=19)
    model = AdaBoost(n_rounds=10).fit(X, y)
    clone = AdaBoost.from_doc(model.to_doc())
    Xt = np.random.default_rng(2).normal(0, 2, (40, 2))
    assert np.allclose(model.predict_proba(Xt), clone.predict_proba(Xt))
