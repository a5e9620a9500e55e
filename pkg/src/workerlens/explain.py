"""Local surrogate explanations of classifier decisions.

Three stages: (i) draw a neighborhood of synthetic samples around an
instance from the training distribution, (ii) score them with the
black-box model, (iii) fit a proximity-weighted ridge regression on the
black-box P(inexpert) and read its coefficients as feature relevances.

Reported thresholds come from the training-set quartile discretization of
each feature: every statement is a half-open bin (lower < value <= upper)
that contains the instance's value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .events import FeatureMatrix
from .learn.evaluate import UnlabeledMatrix

KERNEL_WIDTH_FACTOR = 0.75  # proximity kernel width = factor * sqrt(d)
RIDGE_LAMBDA = 1e-3
RIDGE_LAMBDA_MAX = 1e3


class SingularSystem(RuntimeError):
    """The surrogate normal equations stayed singular at maximum ridge."""


@dataclass(frozen=True)
class TrainStats:
    """Per-feature location/scale and quartiles of a training matrix."""

    columns: list
    mean: np.ndarray
    std: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    q3: np.ndarray

    @classmethod
    def from_matrix(cls, matrix: FeatureMatrix) -> "TrainStats":
        rows = matrix.rows
        return cls(
            columns=list(matrix.columns),
            mean=rows.mean(axis=0),
            std=rows.std(axis=0),
            q1=np.quantile(rows, 0.25, axis=0),
            q2=np.quantile(rows, 0.5, axis=0),
            q3=np.quantile(rows, 0.75, axis=0),
        )

    def to_doc(self):
        return {
            "columns": list(self.columns),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "q1": self.q1.tolist(),
            "q2": self.q2.tolist(),
            "q3": self.q3.tolist(),
        }

    @classmethod
    def from_doc(cls, doc):
        return cls(
            columns=list(doc["columns"]),
            mean=np.asarray(doc["mean"]),
            std=np.asarray(doc["std"]),
            q1=np.asarray(doc["q1"]),
            q2=np.asarray(doc["q2"]),
            q3=np.asarray(doc["q3"]),
        )


@dataclass(frozen=True)
class ExplanationTerm:
    feature: str
    weight: float
    contribution: float  # weight x standardized instance value;
                         # positive pushes the prediction toward inexpert
    bin_low: float | None
    bin_high: float | None
    statement: str

    def to_doc(self):
        return {"feature": self.feature, "weight": self.weight,
                "contribution": self.contribution,
                "bin_low": self.bin_low, "bin_high": self.bin_high,
                "statement": self.statement}


@dataclass
class Explanation:
    instance_id: str
    predicted: int  # expert=0 / inexpert=1
    confidence: float
    terms: list
    surrogate_r2: float

    def to_doc(self):
        return {
            "instance_id": self.instance_id,
            "predicted": "expert" if self.predicted == 0 else "inexpert",
            "confidence": self.confidence,
            "terms": [t.to_doc() for t in self.terms],
            "surrogate_r2": self.surrogate_r2,
        }


@dataclass
class RelevanceRanking:
    """Features ordered by mean absolute surrogate weight, descending."""

    ranking: list  # [(feature, mean |weight|)]

    def features(self):
        return [name for name, _ in self.ranking]

    def to_doc(self):
        return {"ranking": [[name, float(v)] for name, v in self.ranking]}


def perturb(instance, stats: TrainStats, n_samples: int, seed: int):
    """Neighborhood samples and proximity weights for one instance.

    Each feature is drawn from a normal law with the training mean/std
    (zero-variance features stay at the mean); row 0 is the instance
    itself.  Weights are exp(-D^2 / sigma^2) with D the Euclidean
    distance in standardized space and sigma = 0.75 * sqrt(d).
    """
    instance = np.asarray(instance, dtype=np.float64)
    if n_samples < 50:
        raise ValueError("perturbation needs at least 50 samples")
    d = len(stats.columns)
    gen = rngmod.stream(seed, "perturb")
    samples = stats.mean + gen.standard_normal((n_samples, d)) * stats.std
    samples[0] = instance
    denom = np.where(stats.std > 0, stats.std, 1.0)
    z = (samples - instance) / denom
    dist_sq = np.sum(z * z, axis=1)
    sigma = KERNEL_WIDTH_FACTOR * math.sqrt(d)
    weights = np.exp(-dist_sq / (sigma * sigma))
    return samples, weights


def fit_surrogate(samples, weights, blackbox_probs):
    """Weighted ridge regression of black-box scores on the samples.

    Features are standardized by the samples' own mean/std so the
    coefficients are comparable across features.  Returns
    (coefficients, intercept, weighted R^2).  The ridge escalates x10
    from 1e-3 when the system is singular; past 1e3 it gives up.
    """
    samples = np.asarray(samples, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    y = np.asarray(blackbox_probs, dtype=np.float64)
    mean = samples.mean(axis=0)
    std = samples.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    Z = (samples - mean) / scale
    A = np.column_stack([np.ones(len(Z)), Z])
    AtW = A.T * w
    G = AtW @ A
    rhs = AtW @ y
    ridge = np.eye(A.shape[1])
    ridge[0, 0] = 0.0  # intercept unpenalized
    lam = RIDGE_LAMBDA
    while True:
        try:
            beta = np.linalg.solve(G + lam * ridge, rhs)
            if np.isfinite(beta).all():
                break
        except np.linalg.LinAlgError:
            pass
        lam *= 10.0
        if lam > RIDGE_LAMBDA_MAX:
            raise SingularSystem("surrogate system singular at maximum ridge")
    pred = A @ beta
    resid = y - pred
    sse = float(np.sum(w * resid * resid))
    ybar = float(np.sum(w * y) / np.sum(w))
    sst = float(np.sum(w * (y - ybar) ** 2))
    r2 = 1.0 if sst <= 1e-12 else 1.0 - sse / sst
    r2 = min(1.0, max(0.0, r2))
    coefs = beta[1:]
    return coefs, float(beta[0]), r2


def bin_of(value: float, q1: float, q2: float, q3: float):
    """The half-open quartile bin containing `value`."""
    if value <= q1:
        return None, q1
    if value <= q2:
        return q1, q2
    if value <= q3:
        return q2, q3
    return q3, None


def bin_statement(feature: str, low, high) -> str:
    if low is None:
        return f"{feature} ≤ {high:.2f}"
    if high is None:
        return f"{feature} > {low:.2f}"
    return f"{low:.2f} < {feature} ≤ {high:.2f}"


def local_weights(model, instance, stats: TrainStats, n_samples: int, seed: int):
    """Raw surrogate coefficients (full feature vector) plus fit quality."""
    samples, weights = perturb(instance, stats, n_samples, seed)
    probs = model.predict_proba(samples)[:, 1]
    return fit_surrogate(samples, weights, probs)


def explain_instance(model, instance, stats: TrainStats, n_samples: int = 500,
                     top_k: int = 6, seed: int = 0,
                     instance_id: str = "") -> Explanation:
    """Explanation of one prediction: ranked terms with threshold bins."""
    instance = np.asarray(instance, dtype=np.float64)
    coefs, _, r2 = local_weights(model, instance, stats, n_samples, seed)
    proba = model.predict_proba(instance.reshape(1, -1))[0]
    predicted = int(np.argmax(proba))
    order = np.argsort(-np.abs(coefs), kind="stable")
    denom = np.where(stats.std > 0, stats.std, 1.0)
    terms = []
    for j in order[:max(top_k, 0)]:
        low, high = bin_of(instance[j], stats.q1[j], stats.q2[j], stats.q3[j])
        z = (instance[j] - stats.mean[j]) / denom[j]
        terms.append(ExplanationTerm(
            feature=stats.columns[j],
            weight=float(coefs[j]),
            contribution=float(coefs[j] * z),
            bin_low=low if low is None else float(low),
            bin_high=high if high is None else float(high),
            statement=bin_statement(stats.columns[j], low, high),
        ))
    return Explanation(
        instance_id=instance_id,
        predicted=predicted,
        confidence=float(proba[predicted]),
        terms=terms,
        surrogate_r2=r2,
    )


def rank_features(model, matrix: FeatureMatrix, seed: int = 0,
                  n_samples: int = 500) -> RelevanceRanking:
    """Mean absolute surrogate weight per feature over every matrix row."""
    if matrix.labels is None:
        raise UnlabeledMatrix("relevance ranking needs a labeled matrix")
    stats = TrainStats.from_matrix(matrix)
    acc = np.zeros(matrix.width)
    for i in range(matrix.n_rows):
        coefs, _, _ = local_weights(model, matrix.rows[i], stats, n_samples,
                                    rngmod.child_seed(seed, "rank", i))
        acc += np.abs(coefs)
    acc /= matrix.n_rows
    order = np.argsort(-acc, kind="stable")
    return RelevanceRanking([(matrix.columns[j], float(acc[j])) for j in order])
