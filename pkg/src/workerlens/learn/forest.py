"""Random forest: bootstrapped CART trees with per-node feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from .. import rng as rngmod
from .tree import DecisionTree, EmptyDataset


class UntrainedModel(RuntimeError):
    """Importances or predictions were requested before fit."""


class RandomForest:
    """Averages `n_trees` CART trees fit on bootstrap resamples.

    Per-tree randomness comes from the named streams ("rf", i) of the
    model seed, so results are identical regardless of evaluation order.
    Probabilities are the mean of per-tree leaf class frequencies.
    """

    def __init__(self, n_trees=50, max_depth=None, min_samples_leaf=1,
                 max_features="sqrt", bootstrap=True, seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed
        self.trees: list[DecisionTree] = []

    def _n_candidates(self, d):
        if self.max_features == "sqrt":
            return max(1, round(math.sqrt(d)))
        if self.max_features in (None, "all"):
            return d
        return max(1, min(d, int(self.max_features)))

    def fit(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        if X.shape[0] == 0:
            raise EmptyDataset("random forest needs at least one sample")
        n, d = X.shape
        k = self._n_candidates(d)
        self.trees = []
        for i in range(self.n_trees):
            stream = rngmod.stream(self.seed, "rf", i)
            idx = stream.integers(0, n, n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                max_features=k if k < d else None,
                rng=stream,
            )
            tree.fit(X[idx], y[idx])
            self.trees.append(tree)
        return self

    def _ensure_fit(self):
        if not self.trees:
            raise UntrainedModel("random forest has not been fit")

    def predict_proba(self, X):
        self._ensure_fit()
        acc = np.zeros((np.asarray(X).shape[0], 2))
        for tree in self.trees:
            acc += tree.predict_proba(X)
        return acc / len(self.trees)

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def feature_importances(self):
        """Mean over trees of raw impurity-decrease sums, normalized to 1."""
        self._ensure_fit()
        raw = np.mean([t.importances for t in self.trees], axis=0)
        total = raw.sum()
        return raw / total if total > 0 else raw

    def to_doc(self):
        return {
            "kind": "random_forest",
            "params": {
                "n_trees": self.n_trees,
                "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "max_features": self.max_features,
                "bootstrap": self.bootstrap,
                "seed": self.seed,
            },
            "trees": [t.to_doc() for t in self.trees],
            "importances": [list(map(float, t.importances)) for t in self.trees],
        }

    @classmethod
    def from_doc(cls, doc):
        model = cls(**doc["params"])
        model.trees = [DecisionTree.from_doc(t) for t in doc["trees"]]
        for tree, imps in zip(model.trees, doc["importances"]):
            tree.importances = np.asarray(imps, dtype=np.float64)
        return model
