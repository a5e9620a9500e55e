import numpy as np
import pytest

from workerlens.learn import DecisionTree, EmptyDataset


def brute_force_best_decrease(X, y, w=None, min_leaf=1):
    """Exhaustive weighted-Gini search over every feature and threshold."""
    n, d = X.shape
    if w is None:
        w = np.ones(n)
    tot0 = float(np.sum(w[y == 0]))
    tot1 = float(np.sum(w[y == 1]))
    tot = tot0 + tot1
    parent = 1.0 - (tot0 ** 2 + tot1 ** 2) / tot ** 2
    best = -np.inf
    for f in range(d):
        values = np.unique(X[:, f])
        for lo, hi in zip(values, values[1:]):
            thr = (lo + hi) / 2.0
            left = X[:, f] <= thr
            nl = int(left.sum())
            if nl < min_leaf or n - nl < min_leaf:
                continue
            wl = w[left]
            wr = w[~left]
            yl = y[left]
            yr = y[~left]
            swl, swr = float(wl.sum()), float(wr.sum())
            if swl <= 0 or swr <= 0:
                continue
            gl = 1.0 - ((wl[yl == 0].sum()) ** 2 + (wl[yl == 1].sum()) ** 2) / swl ** 2
            gr = 1.0 - ((wr[yr == 0].sum()) ** 2 + (wr[yr == 1].sum()) ** 2) / swr ** 2
            dec = parent - (swl / tot) * gl - (swr / tot) * gr
            best = max(best, dec)
    return best


def test_pure_dataset_single_leaf():
    X = np.array([[1.0], [2.0], [3.0]])
    y = np.zeros(3, dtype=np.int64)
    tree = DecisionTree().fit(X, y)
    assert tree.root.is_leaf
    assert (tree.predict(X) == 0).all()


def test_one_dimensional_threshold_location():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 0, 1, 1], dtype=np.int64)
    tree = DecisionTree().fit(X, y)
    assert not tree.root.is_leaf
    assert 2.0 < tree.root.threshold <= 3.0
    assert (tree.predict(X) == y).all()


def test_xor_solved_at_depth_two():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    y = np.array([0, 1, 1, 0], dtype=np.int64)
    tree = DecisionTree(max_depth=2).fit(X, y)
    assert (tree.predict(X) == y).all()


def test_max_depth_and_min_samples_leaf():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(50, 3))
    y = (X[:, 0] > 0).astype(np.int64)
    stump = DecisionTree(max_depth=1).fit(X, y)
    assert stump.root.left.is_leaf and stump.root.right.is_leaf
    big_leaf = DecisionTree(min_samples_leaf=20, keep_samples=True).fit(X, y)
    for node in big_leaf.nodes():
        if node.is_leaf:
            assert len(node.sample_idx) >= 20 or node is big_leaf.root


def test_empty_dataset_rejected():
    with pytest.raises(EmptyDataset):
        DecisionTree().fit(np.zeros((0, 2)), np.zeros(0, dtype=np.int64))


def test_weighted_fit_follows_weights():
    # two clusters; weights silence the right cluster's minority labels
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    y = np.array([0, 0, 1, 0], dtype=np.int64)
    w = np.array([1.0, 1.0, 1.0, 1e-6])
    tree = DecisionTree(max_depth=1).fit(X, y, sample_weight=w)
    assert tree.predict(np.array([[10.5]]))[0] == 1


def test_every_node_split_matches_exhaustive_search():
    rng = np.random.default_rng(7)
    for trial in range(50):
        n = int(rng.integers(4, 65))
        d = int(rng.integers(1, 5))
        X = np.round(rng.normal(size=(n, d)), 2)  # coarse grid forces ties
        y = rng.integers(0, 2, n).astype(np.int64)
        if len(np.unique(y)) < 2:
            continue
        tree = DecisionTree(keep_samples=True).fit(X, y)
        for node in tree.nodes():
            if node.is_leaf:
                continue
            idx = node.sample_idx
            oracle = brute_force_best_decrease(X[idx], y[idx])
            left = X[idx, node.feature] <= node.threshold
            wl = left.sum() / len(idx)
            yl, yr = y[idx][left], y[idx][~left]
            gl = 1.0 - ((yl == 0).mean() ** 2 + (yl == 1).mean() ** 2) if len(yl) else 0.0
            gr = 1.0 - ((yr == 0).mean() ** 2 + (yr == 1).mean() ** 2) if len(yr) else 0.0
            g = 1.0 - ((y[idx] == 0).mean() ** 2 + (y[idx] == 1).mean() ** 2)
            achieved = g - wl * gl - (1 - wl) * gr
            assert achieved == pytest.approx(oracle, abs=1e-9), (trial, node.feature)


def test_serialization_round_trip():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(40, 3))
    y = (X[:, 1] > 0.2).astype(np.int64)
    tree = DecisionTree(max_depth=4).fit(X, y)
    clone = DecisionTree.from_doc(tree.to_doc())
    Xt = rng.normal(size=(25, 3))
    assert (tree.predict(Xt) == clone.predict(Xt)).all()
    assert np.allclose(tree.predict_proba(Xt), clone.predict_proba(Xt))
