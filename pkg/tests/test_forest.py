import numpy as np
import pytest

from workerlens.learn import DecisionTree, RandomForest, stratified_kfold
from workerlens.learn.forest import UntrainedModel

from conftest import blobs


def test_degenerate_forest_equals_single_tree():
    X, y = blobs(seed=4)
    forest = RandomForest(n_trees=1, bootstrap=False, max_features=None, seed=0).fit(X, y)
    tree = DecisionTree().fit(X, y)
    Xt = np.random.default_rng(5).normal(0, 2, (50, 2))
    assert (forest.predict(Xt) == tree.predict(Xt)).all()
    assert np.allclose(forest.predict_proba(Xt), tree.predict_proba(Xt))


def test_blobs_cross_validated_accuracy():
    X, y = blobs(n_per_class=30, seed=6)
    correct = 0
    for train_idx, test_idx in stratified_kfold(y, k=10, seed=0):
        model = RandomForest(n_trees=20, seed=0).fit(X[train_idx], y[train_idx])
        correct += int((model.predict(X[test_idx]) == y[test_idx]).sum())
    assert correct / len(y) >= 0.95


def test_same_seed_identical_state():
    X, y = blobs(seed=7)
    a = RandomForest(n_trees=8, seed=123).fit(X, y)
    b = RandomForest(n_trees=8, seed=123).fit(X, y)
    assert a.to_doc() == b.to_doc()
    c = RandomForest(n_trees=8, seed=124).fit(X, y)
    assert c.to_doc() != a.to_doc()


def test_probabilities_normalized():
    X, y = blobs(seed=8)
    forest = RandomForest(n_trees=15, seed=1).fit(X, y)
    proba = forest.predict_proba(X)
    assert ((proba >= 0) & (proba <= 1)).all()
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_untrained_errors():
    with pytest.raises(UntrainedModel):
        RandomForest().predict(np.zeros((1, 2)))
    with pytest.raises(UntrainedModel):
        RandomForest().feature_importances()


def test_serialization_round_trip():
    X, y = blobs(seed=9)
    forest = RandomForest(n_trees=5, seed=2).fit(X, y)
    clone = RandomForest.from_doc(forest.to_doc())
    Xt = np.random.default_rng(1).normal(0, 2, (30, 2))
    assert np.allclose(forest.predict_proba(Xt), clone.predict_proba(Xt))
    assert np.allclose(forest.feature_importances(), clone.feature_importances())
