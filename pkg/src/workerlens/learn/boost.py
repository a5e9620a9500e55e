"""Two-class discrete AdaBoost over decision stumps."""

from __future__ import annotations

import math

import numpy as np

from .tree import DecisionTree

ALPHA_CAP = math.log(1e10)  # stage weight when a stump is already perfect


class DegenerateWeakLearner(RuntimeError):
    """No stump beats chance on the initial weighting."""


class AdaBoost:
    """Boosted depth-1 trees: round t fits a stump on the current sample
    weights, earns stage weight alpha_t = ln((1 - eps_t) / eps_t), and
    multiplies misclassified sample weights by exp(alpha_t).

    The ensemble margin is sum(alpha_t * h_t) with h in {-1, +1} (+1 for
    the inexpert class); prediction is its sign, probability the logistic
    of the margin.  Boosting stops early when a round is perfect
    (eps = 0, alpha capped) or no longer better than chance.
    """

    def __init__(self, n_rounds=50, seed=0):
        self.n_rounds = n_rounds
        self.seed = seed
        self.stumps: list[DecisionTree] = []
        self.alphas: list[float] = []

    def fit(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        if len(np.unique(y)) < 2:
            raise DegenerateWeakLearner("boosting needs both classes present")
        n = X.shape[0]
        w = np.full(n, 1.0 / n)
        self.stumps = []
        self.alphas = []
        for t in range(self.n_rounds):
            stump = DecisionTree(max_depth=1).fit(X, y, sample_weight=w)
            pred = stump.predict(X)
            miss = pred != y
            eps = float(np.sum(w[miss]))
            if eps >= 0.5:
                if t == 0:
                    raise DegenerateWeakLearner(
                        f"best stump has weighted error {eps:.3f} >= 0.5 at round 1"
                    )
                break
            if eps <= 0.0:
                self.stumps.append(stump)
                self.alphas.append(ALPHA_CAP)
                break
            alpha = math.log((1.0 - eps) / eps)
            self.stumps.append(stump)
            self.alphas.append(alpha)
            w = w * np.exp(alpha * miss)
            w = w / np.sum(w)
        return self

    def margin(self, X):
        """Weighted vote sum; positive favors the inexpert class."""
        X = np.asarray(X, dtype=np.float64)
        f = np.zeros(X.shape[0])
        for stump, alpha in zip(self.stumps, self.alphas):
            h = stump.predict(X) * 2.0 - 1.0  # {0,1} -> {-1,+1}
            f += alpha * h
        return f

    def predict_proba(self, X):
        p1 = 1.0 / (1.0 + np.exp(-self.margin(X)))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def training_error_curve(self, X, y):
        """Ensemble 0/1 training error after each round (testing hook)."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        f = np.zeros(X.shape[0])
        errs = []
        for stump, alpha in zip(self.stumps, self.alphas):
            h = stump.predict(X) * 2.0 - 1.0
            f += alpha * h
            pred = (f > 0).astype(np.int64)
            errs.append(float(np.mean(pred != y)))
        return errs

    def to_doc(self):
        return {
            "kind": "adaboost",
            "params": {"n_rounds": self.n_rounds, "seed": self.seed},
            "alphas": [float(a) for a in self.alphas],
            "stumps": [s.to_doc() for s in self.stumps],
        }

    @classmethod
    def from_doc(cls, doc):
        model = cls(**doc["params"])
        model.alphas = list(doc["alphas"])
        model.stumps = [DecisionTree.from_doc(s) for s in doc["stumps"]]
        return model
