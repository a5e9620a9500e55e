"""Soft-margin support vector classifier trained with SMO.

Four kernels: linear, polynomial, RBF, sigmoid.  Features are
standardized internally against the training split; probabilities come
from a logistic (Platt) calibration fit on the training margins.
"""

from __future__ import annotations

import numpy as np

from .._kernels import smo_solve

KERNELS = ("linear", "poly", "rbf", "sigmoid")


class NonConvergence(RuntimeError):
    """SMO exhausted its step budget; carries the residual KKT violation."""

    def __init__(self, message, kkt_violation):
        super().__init__(message)
        self.kkt_violation = kkt_violation


def kernel_matrix(kind, A, B, gamma, degree, coef0):
    """Gram matrix k(a, b) for rows of A against rows of B."""
    if kind == "linear":
        return A @ B.T
    if kind == "poly":
        return (gamma * (A @ B.T) + coef0) ** degree
    if kind == "rbf":
        sq = (np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :]
              - 2.0 * (A @ B.T))
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-gamma * sq)
    if kind == "sigmoid":
        return np.tanh(gamma * (A @ B.T) + coef0)
    raise ValueError(f"unknown kernel {kind!r}")


def kkt_violation(K, s, alpha, b, C):
    """Largest KKT residual of a dual solution (s in {-1,+1})."""
    m = s * (K @ (alpha * s) + b)
    viol = 0.0
    for i in range(len(s)):
        if alpha[i] <= 0.0:
            viol = max(viol, 1.0 - m[i])
        elif alpha[i] >= C:
            viol = max(viol, m[i] - 1.0)
        else:
            viol = max(viol, abs(m[i] - 1.0))
    return float(viol)


def platt_scale(margins, y, max_iter=100):
    """Fit P(y=1 | f) = 1 / (1 + exp(A f + B)) by Newton iterations.

    Uses Platt's smoothed targets so separable data cannot push A to
    infinity.  Deterministic.
    """
    f = np.asarray(margins, dtype=np.float64)
    y = np.asarray(y)
    n1 = int(np.sum(y == 1))
    n0 = len(y) - n1
    hi = (n1 + 1.0) / (n1 + 2.0)
    lo = 1.0 / (n0 + 2.0)
    t = np.where(y == 1, hi, lo)
    A, B = 0.0, np.log((n0 + 1.0) / (n1 + 1.0))
    for _ in range(max_iter):
        z = A * f + B
        p = 1.0 / (1.0 + np.exp(z))
        g = p - t  # d(nll)/dz with this parameterization
        gA = float(np.sum(g * f))
        gB = float(np.sum(g))
        wdiag = p * (1.0 - p)
        hAA = float(np.sum(wdiag * f * f)) + 1e-12
        hAB = float(np.sum(wdiag * f))
        hBB = float(np.sum(wdiag)) + 1e-12
        det = hAA * hBB - hAB * hAB
        if abs(det) < 1e-18:
            break
        dA = (hBB * gA - hAB * gB) / det
        dB = (hAA * gB - hAB * gA) / det
        A += dA
        B += dB
        if abs(dA) < 1e-10 and abs(dB) < 1e-10:
            break
    return float(A), float(B)


class SVC:
    """Two-class SVC; the dual is solved to the KKT tolerance `tol`."""

    def __init__(self, kernel="rbf", C=1.0, gamma="scale", degree=3,
                 coef0=0.0, tol=1e-3, max_steps=None, seed=0):
        if kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}")
        self.kernel = kernel
        self.C = C
        self.gamma = gamma
        self.degree = degree
        self.coef0 = coef0
        self.tol = tol
        self.max_steps = max_steps
        self.seed = seed

    def _standardize(self, X):
        return (X - self.mean_) / self.scale_

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if len(np.unique(y)) < 2:
            raise ValueError("SVC needs both classes present")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        Z = self._standardize(X)
        if self.gamma == "scale":
            var = float(Z.var())
            self.gamma_ = 1.0 / (Z.shape[1] * var) if var > 0 else 1.0
        else:
            self.gamma_ = float(self.gamma)
        s = (2 * y - 1).astype(np.float64)  # inexpert=1 -> +1
        K = kernel_matrix(self.kernel, Z, Z, self.gamma_, self.degree, self.coef0)
        budget = self.max_steps or max(20000, 200 * len(y))
        alpha, b, steps, converged = smo_solve(K, s, self.C, self.tol, 1e-8, budget)
        if not converged:
            raise NonConvergence(
                f"SMO did not converge within {budget} steps",
                kkt_violation(K, s, alpha, b, self.C),
            )
        self.b_ = float(b)
        self.steps_ = int(steps)
        sv = alpha > 0
        self.support_z_ = Z[sv]
        self.dual_ = (alpha[sv] * s[sv])
        self.alpha_full_ = alpha
        margins = K @ (alpha * s) + b
        self.platt_ = platt_scale(margins, y)
        return self

    def decision_function(self, X):
        Z = self._standardize(np.asarray(X, dtype=np.float64))
        K = kernel_matrix(self.kernel, Z, self.support_z_, self.gamma_,
                          self.degree, self.coef0)
        return K @ self.dual_ + self.b_

    def predict_proba(self, X):
        f = self.decision_function(X)
        A, B = self.platt_
        p1 = 1.0 / (1.0 + np.exp(A * f + B))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def to_doc(self):
        return {
            "kind": "svc",
            "params": {
                "kernel": self.kernel, "C": self.C, "gamma": self.gamma,
                "degree": self.degree, "coef0": self.coef0, "tol": self.tol,
                "max_steps": self.max_steps, "seed": self.seed,
            },
            "state": {
                "mean": self.mean_.tolist(),
                "scale": self.scale_.tolist(),
                "gamma": self.gamma_,
                "b": self.b_,
                "support_z": self.support_z_.tolist(),
                "dual": self.dual_.tolist(),
                "platt": list(self.platt_),
            },
        }

    @classmethod
    def from_doc(cls, doc):
        model = cls(**doc["params"])
        st = doc["state"]
        model.mean_ = np.asarray(st["mean"])
        model.scale_ = np.asarray(st["scale"])
        model.gamma_ = st["gamma"]
        model.b_ = st["b"]
        model.support_z_ = np.asarray(st["support_z"])
        model.dual_ = np.asarray(st["dual"])
        model.platt_ = tuple(st["platt"])
        return model
