"""Two-method feature selection: Pearson threshold filter and MDI filter.

A feature survives only if both methods keep it.  The Pearson side keeps
columns whose absolute correlation with the target strictly exceeds the
threshold `delta` (default 0.2); the MDI side keeps columns whose forest
importance is at least the importance mean.  Constant columns correlate
as 0 and are excluded: they cannot separate classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .events import FeatureMatrix
from .learn.evaluate import UnlabeledMatrix
from .learn.forest import RandomForest, UntrainedModel


class DegenerateInput(ValueError):
    """Correlation of a constant vector is undefined."""


@dataclass
class SelectionReport:
    pearson: dict = field(default_factory=dict)
    pearson_selected: set = field(default_factory=set)
    mdi: dict = field(default_factory=dict)
    mdi_selected: set = field(default_factory=set)
    final: set = field(default_factory=set)
    delta: float = 0.2

    def to_doc(self):
        return {
            "pearson": {c: float(r) for c, r in self.pearson.items()},
            "pearson_selected": sorted(self.pearson_selected),
            "mdi": {c: float(v) for c, v in self.mdi.items()},
            "mdi_selected": sorted(self.mdi_selected),
            "final": sorted(self.final),
            "delta": self.delta,
        }

    @classmethod
    def from_doc(cls, doc):
        return cls(
            pearson=dict(doc["pearson"]),
            pearson_selected=set(doc["pearson_selected"]),
            mdi=dict(doc["mdi"]),
            mdi_selected=set(doc["mdi_selected"]),
            final=set(doc["final"]),
            delta=doc["delta"],
        )


def pearson(x, y) -> float:
    """Pearson correlation coefficient of two equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two equal-length vectors")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInput("correlation with a constant vector is undefined")
    return float(np.sum(dx * dy) / (sx * sy))


def pearson_filter(matrix: FeatureMatrix, delta: float = 0.2):
    """Columns whose |r| with the target strictly exceeds `delta`.

    Returns (selected set, column -> r map); constant columns report r=0.
    """
    if matrix.labels is None:
        raise UnlabeledMatrix("pearson filter needs a labeled matrix")
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1)")
    y = matrix.labels.astype(np.float64)
    rs = {}
    selected = set()
    for name in matrix.columns:
        col = matrix.column(name)
        try:
            r = pearson(col, y)
        except DegenerateInput:
            r = 0.0
        rs[name] = r
        if abs(r) > delta:
            selected.add(name)
    return selected, rs


def mdi_importances(forest: RandomForest, columns) -> dict:
    """Per-column MDI importance of a trained forest, normalized to sum 1."""
    if not forest.trees:
        raise UntrainedModel("forest must be trained before computing importances")
    values = forest.feature_importances()
    if len(values) != len(columns):
        raise ValueError("forest was trained on a different column set")
    return {name: float(v) for name, v in zip(columns, values)}


def mdi_filter(importances: dict) -> set:
    """Columns with importance at or above the importance mean."""
    if not importances:
        raise ValueError("importances must be non-empty")
    mean = sum(importances.values()) / len(importances)
    return {name for name, v in importances.items() if v >= mean}


def select(matrix: FeatureMatrix, delta: float = 0.2, n_trees: int = 50,
           seed: int = 0) -> SelectionReport:
    """Run both filters and intersect; deterministic given `seed`."""
    pearson_selected, rs = pearson_filter(matrix, delta)
    forest = RandomForest(n_trees=n_trees, seed=seed)
    forest.fit(matrix.rows, matrix.labels)
    importances = mdi_importances(forest, matrix.columns)
    mdi_selected = mdi_filter(importances)
    return SelectionReport(
        pearson=rs,
        pearson_selected=pearson_selected,
        mdi=importances,
        mdi_selected=mdi_selected,
        final=pearson_selected & mdi_selected,
        delta=delta,
    )
