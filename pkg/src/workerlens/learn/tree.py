"""Greedy CART decision tree for two classes, Gini impurity splits."""

from __future__ import annotations

import numpy as np

from .._kernels import split_search


class EmptyDataset(ValueError):
    """Training was attempted on an empty matrix."""


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "counts", "sample_idx")

    def __init__(self):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.counts = None  # weighted class masses [w0, w1]
        self.sample_idx = None

    @property
    def is_leaf(self):
        return self.feature < 0

    def to_doc(self):
        if self.is_leaf:
            return {"c": [float(self.counts[0]), float(self.counts[1])]}
        return {
            "f": int(self.feature),
            "t": float(self.threshold),
            "c": [float(self.counts[0]), float(self.counts[1])],
            "l": self.left.to_doc(),
            "r": self.right.to_doc(),
        }

    @classmethod
    def from_doc(cls, doc):
        node = cls()
        node.counts = np.asarray(doc["c"], dtype=np.float64)
        if "f" in doc:
            node.feature = doc["f"]
            node.threshold = doc["t"]
            node.left = cls.from_doc(doc["l"])
            node.right = cls.from_doc(doc["r"])
        return node


class DecisionTree:
    """CART: each node takes the (feature, threshold) with maximal weighted
    Gini decrease over its candidate features; leaves keep class masses.

    `max_features` enables per-node candidate subsampling (used by the
    forest); `keep_samples` records each node's original row indices so
    tests can replay the split search exhaustively.
    """

    def __init__(self, max_depth=None, min_samples_leaf=1, max_features=None,
                 rng=None, keep_samples=False):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.rng = rng
        self.keep_samples = keep_samples
        self.root = None
        self.n_features = 0
        self.importances = None  # raw sum of (node weight x impurity decrease)

    def fit(self, X, y, sample_weight=None):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        if X.shape[0] == 0 or X.shape[1] == 0:
            raise EmptyDataset("decision tree needs at least one sample and one feature")
        if sample_weight is None:
            # unit weights keep split scores in exact integer arithmetic,
            # so equally good splits tie exactly and break by feature index
            sample_weight = np.ones(X.shape[0])
        w = np.ascontiguousarray(sample_weight, dtype=np.float64)
        self.n_features = X.shape[1]
        self.importances = np.zeros(self.n_features)
        self._w_root = float(np.sum(w))
        idx = np.arange(X.shape[0])
        self.root = self._build(X, y, w, idx, 0)
        return self

    def _candidates(self):
        d = self.n_features
        k = d
        if self.max_features is not None:
            k = max(1, min(d, int(self.max_features)))
        if k >= d or self.rng is None:
            return np.arange(d, dtype=np.int64)
        return self.rng.choice(d, size=k, replace=False).astype(np.int64)

    def _build(self, X, y, w, idx, depth):
        node = _Node()
        yn = y[idx]
        wn = w[idx]
        node.counts = np.array([float(np.sum(wn[yn == 0])), float(np.sum(wn[yn == 1]))])
        if self.keep_samples:
            node.sample_idx = idx.copy()
        pure = (yn == yn[0]).all()
        if pure or (self.max_depth is not None and depth >= self.max_depth):
            return node
        feat, thr, dec = split_search(X[idx], yn, wn, self._candidates(),
                                      self.min_samples_leaf)
        if feat < 0:
            return node
        node.feature = feat
        node.threshold = thr
        w_node = float(np.sum(wn))
        if self._w_root > 0:
            self.importances[feat] += (w_node / self._w_root) * dec
        mask = X[idx, feat] <= thr
        node.left = self._build(X, y, w, idx[mask], depth + 1)
        node.right = self._build(X, y, w, idx[~mask], depth + 1)
        return node

    def _leaf(self, x):
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((X.shape[0], 2))
        for i in range(X.shape[0]):
            counts = self._leaf(X[i]).counts
            total = counts[0] + counts[1]
            out[i] = counts / total if total > 0 else (0.5, 0.5)
        return out

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def nodes(self):
        """All nodes in preorder (testing hook)."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def to_doc(self):
        return {"kind": "tree", "n_features": self.n_features, "root": self.root.to_doc()}

    @classmethod
    def from_doc(cls, doc):
        tree = cls()
        tree.n_features = doc["n_features"]
        tree.root = _Node.from_doc(doc["root"])
        return tree
