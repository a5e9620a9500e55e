"""Model specs, stratified cross-validation, and pooled classification metrics."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .. import rng as rngmod
from ..events import ExpertiseLabel, FeatureMatrix
from .boost import AdaBoost
from .forest import RandomForest
from .svc import SVC

FAMILIES = ("svc_linear", "svc_poly", "svc_rbf", "svc_sigmoid",
            "random_forest", "adaboost")

# documented hyperparameter defaults per family
DEFAULTS = {
    "svc_linear": {"C": 1.0, "tol": 1e-3},
    "svc_poly": {"C": 1.0, "gamma": "scale", "degree": 3, "coef0": 0.0, "tol": 1e-3},
    "svc_rbf": {"C": 1.0, "gamma": "scale", "tol": 1e-3},
    "svc_sigmoid": {"C": 1.0, "gamma": "scale", "coef0": 0.0, "tol": 1e-3},
    "random_forest": {"n_trees": 50, "max_depth": None, "min_samples_leaf": 1,
                      "max_features": "sqrt", "bootstrap": True},
    "adaboost": {"n_rounds": 50},
}


class ClassTooSmall(ValueError):
    """A class has fewer samples than requested folds."""


@dataclass(frozen=True)
class ModelSpec:
    family: str
    hyperparams: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        unknown = set(self.hyperparams) - set(DEFAULTS[self.family])
        if unknown:
            raise ValueError(f"unknown hyperparams for {self.family}: {sorted(unknown)}")

    def resolved(self) -> dict:
        params = dict(DEFAULTS[self.family])
        params.update(self.hyperparams)
        return params

    def to_doc(self):
        return {"family": self.family, "hyperparams": dict(self.hyperparams),
                "seed": self.seed}

    @classmethod
    def from_doc(cls, doc):
        return cls(family=doc["family"], hyperparams=dict(doc.get("hyperparams", {})),
                   seed=int(doc.get("seed", 0)))


def build_model(spec: ModelSpec):
    params = spec.resolved()
    if spec.family == "random_forest":
        return RandomForest(seed=spec.seed, **params)
    if spec.family == "adaboost":
        return AdaBoost(seed=spec.seed, **params)
    kernel = spec.family.split("_", 1)[1]
    return SVC(kernel=kernel, seed=spec.seed, **params)


MODEL_CLASSES = {"tree": None, "random_forest": RandomForest,
                 "adaboost": AdaBoost, "svc": SVC}


def model_from_doc(doc):
    cls = MODEL_CLASSES.get(doc.get("kind"))
    if cls is None:
        raise ValueError(f"cannot restore model kind {doc.get('kind')!r}")
    return cls.from_doc(doc)


def stratified_kfold(labels, k=10, seed=0):
    """k disjoint, exhaustive test partitions, stratified per class.

    Per-fold class counts differ from proportional by at most one; the
    shuffle is driven by the named stream ("kfold") of `seed`.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)
    if k == n:  # leave-one-out: stratification is vacuous
        return [(np.array(sorted(set(range(n)) - {i}), dtype=np.int64),
                 np.array([i], dtype=np.int64)) for i in range(n)]
    folds_test = [[] for _ in range(k)]
    gen = rngmod.stream(seed, "kfold")
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < k:
            raise ClassTooSmall(
                f"class {cls} has {len(idx)} samples, fewer than k={k} folds")
        idx = idx[gen.permutation(len(idx))]
        base, extra = divmod(len(idx), k)
        pos = 0
        for f in range(k):
            size = base + (1 if f < extra else 0)
            folds_test[f].extend(idx[pos:pos + size].tolist())
            pos += size
    out = []
    all_idx = set(range(n))
    for f in range(k):
        test = np.array(sorted(folds_test[f]), dtype=np.int64)
        train = np.array(sorted(all_idx - set(folds_test[f])), dtype=np.int64)
        out.append((train, test))
    return out


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    """Metrics of the k pooled test folds.

    `confusion` rows are actual [expert, inexpert], columns predicted.
    Per-class values are computed independently per class (the
    per-class/"micro" convention); macro values are their unweighted
    means, macro F being the mean of the per-class F values.
    """

    accuracy: float
    per_class: dict
    macro: ClassMetrics
    confusion: list
    total_time_s: float
    n_samples: int
    k: int

    def to_doc(self):
        return {
            "accuracy": self.accuracy,
            "per_class": {name: vars(m).copy() for name, m in self.per_class.items()},
            "macro": vars(self.macro).copy(),
            "confusion": [list(map(int, row)) for row in self.confusion],
            "total_time_s": self.total_time_s,
            "n_samples": self.n_samples,
            "k": self.k,
        }

    @classmethod
    def from_doc(cls, doc):
        return cls(
            accuracy=doc["accuracy"],
            per_class={name: ClassMetrics(**m) for name, m in doc["per_class"].items()},
            macro=ClassMetrics(**doc["macro"]),
            confusion=doc["confusion"],
            total_time_s=doc["total_time_s"],
            n_samples=doc["n_samples"],
            k=doc["k"],
        )


def confusion_matrix(y_true, y_pred):
    cm = np.zeros((2, 2), dtype=np.int64)
    for t, p in zip(np.asarray(y_true, dtype=np.int64), np.asarray(y_pred, dtype=np.int64)):
        cm[t, p] += 1
    return cm


def metrics_from_confusion(cm, total_time_s=0.0, k=0) -> EvalReport:
    cm = np.asarray(cm, dtype=np.int64)
    n = int(cm.sum())
    accuracy = float(np.trace(cm)) / n if n else 0.0
    per_class = {}
    for code, name in ((0, "expert"), (1, "inexpert")):
        tp = int(cm[code, code])
        fp = int(cm[1 - code, code])
        fn = int(cm[code, 1 - code])
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[name] = ClassMetrics(precision, recall, f1)
    macro = ClassMetrics(
        precision=(per_class["expert"].precision + per_class["inexpert"].precision) / 2,
        recall=(per_class["expert"].recall + per_class["inexpert"].recall) / 2,
        f1=(per_class["expert"].f1 + per_class["inexpert"].f1) / 2,
    )
    return EvalReport(accuracy=accuracy, per_class=per_class, macro=macro,
                      confusion=cm.tolist(), total_time_s=total_time_s,
                      n_samples=n, k=k)


class UnlabeledMatrix(ValueError):
    """The operation needs a labeled matrix."""


def evaluate(spec: ModelSpec, matrix: FeatureMatrix, k=10) -> EvalReport:
    """k-fold cross-validation; fold confusions are pooled by summation
    and all metrics computed from the pooled matrix."""
    if matrix.labels is None:
        raise UnlabeledMatrix("evaluation needs labels")
    folds = stratified_kfold(matrix.labels, k=k, seed=spec.seed)
    cm = np.zeros((2, 2), dtype=np.int64)
    t0 = time.perf_counter()
    for train_idx, test_idx in folds:
        model = build_model(spec)
        model.fit(matrix.rows[train_idx], matrix.labels[train_idx])
        pred = model.predict(matrix.rows[test_idx])
        cm += confusion_matrix(matrix.labels[test_idx], pred)
    elapsed = time.perf_counter() - t0
    return metrics_from_confusion(cm, total_time_s=elapsed, k=k)
