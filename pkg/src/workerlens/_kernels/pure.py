"""Pure-NumPy implementations of the hot numeric kernels.

These mirror the compiled versions in `_native` operation-for-operation
(same accumulation order, same tie-breaking) so both backends return
identical results; tests/test_kernels.py holds them to that.
"""

import numpy as np

NAME = "pure"

_SNAP = 1e-8  # snap optimized multipliers onto the box bounds


def split_search(X, y, w, feat_idx, min_leaf):
    """Best weighted-Gini split over the candidate features of one node.

    X: (n, d) float64 sample block; y: (n,) int64 in {0, 1}; w: (n,)
    float64 sample weights; feat_idx: candidate feature indices in scan
    order; min_leaf: minimum samples on each side.

    Returns (feature, threshold, decrease) with feature == -1 when no
    valid split exists.  Exact score ties break toward the lowest feature
    index, then the lowest threshold, so results do not depend on the
    candidate draw order.
    """
    n = X.shape[0]
    if n < 2 * min_leaf:
        return -1, 0.0, 0.0
    y1 = y.astype(np.float64)
    w0_all = np.cumsum(w * (1.0 - y1))
    w1_all = np.cumsum(w * y1)
    tot0 = float(w0_all[-1])
    tot1 = float(w1_all[-1])
    tot = tot0 + tot1
    if tot <= 0.0:
        return -1, 0.0, 0.0

    best_feat = -1
    best_thr = 0.0
    best_score = -np.inf
    for f in feat_idx:
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        v = col[order]
        ws = w[order]
        ys = y1[order]
        cw0 = np.cumsum(ws * (1.0 - ys))
        cw1 = np.cumsum(ws * ys)
        # candidate j: left = sorted[0..j]; requires a value gap at j
        j = np.arange(n - 1)
        ok = v[:-1] < v[1:]
        if min_leaf > 1:
            ok &= (j + 1 >= min_leaf) & (n - j - 1 >= min_leaf)
        l0 = cw0[:-1]
        l1 = cw1[:-1]
        wl = l0 + l1
        r0 = tot0 - l0
        r1 = tot1 - l1
        wr = tot - wl
        ok &= (wl > 0.0) & (wr > 0.0)
        if not ok.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (l0 * l0 + l1 * l1) / wl + (r0 * r0 + r1 * r1) / wr
        score[~ok] = -np.inf
        jbest = int(np.argmax(score))
        s = float(score[jbest])
        if s > best_score or (s == best_score and int(f) < best_feat):
            best_score = s
            best_feat = int(f)
            thr = (v[jbest] + v[jbest + 1]) / 2.0
            if thr >= v[jbest + 1]:  # midpoint rounded up to the right value
                thr = v[jbest]
            best_thr = float(thr)
    if best_feat < 0:
        return -1, 0.0, 0.0
    decrease = best_score / tot - (tot0 * tot0 + tot1 * tot1) / (tot * tot)
    return best_feat, best_thr, float(decrease)


def _take_step(i1, i2, K, y, alpha, C, eps, state):
    if i1 == i2:
        return 0
    a1o = alpha[i1]
    a2o = alpha[i2]
    y1 = y[i1]
    y2 = y[i2]
    E = state["E"]
    b = state["b"]
    E1 = E[i1]
    E2 = E[i2]
    s = y1 * y2
    if s > 0.0:
        L = max(0.0, a1o + a2o - C)
        H = min(C, a1o + a2o)
    else:
        L = max(0.0, a2o - a1o)
        H = min(C, C + a2o - a1o)
    if L == H:
        return 0
    k11 = K[i1, i1]
    k12 = K[i1, i2]
    k22 = K[i2, i2]
    eta = k11 + k22 - 2.0 * k12
    if eta > 0.0:
        a2 = a2o + y2 * (E1 - E2) / eta
        if a2 < L:
            a2 = L
        elif a2 > H:
            a2 = H
    else:
        # non-positive curvature (indefinite kernel): pick the better endpoint
        gamma = a1o + s * a2o
        v1 = (E1 + y1 - b) - y1 * a1o * k11 - y2 * a2o * k12
        v2 = (E2 + y2 - b) - y1 * a1o * k12 - y2 * a2o * k22
        obj_l = _pair_objective(L, gamma, s, k11, k22, k12, y1, y2, v1, v2)
        obj_h = _pair_objective(H, gamma, s, k11, k22, k12, y1, y2, v1, v2)
        if obj_l < obj_h - eps:
            a2 = L
        elif obj_l > obj_h + eps:
            a2 = H
        else:
            a2 = a2o
    if a2 < _SNAP:
        a2 = 0.0
    elif a2 > C - _SNAP:
        a2 = C
    if abs(a2 - a2o) < eps * (a2 + a2o + eps):
        return 0
    a1 = a1o + s * (a2o - a2)
    if a1 < _SNAP:
        a1 = 0.0
    elif a1 > C - _SNAP:
        a1 = C

    da1 = a1 - a1o
    da2 = a2 - a2o
    b1 = b - E1 - y1 * da1 * k11 - y2 * da2 * k12
    b2 = b - E2 - y1 * da1 * k12 - y2 * da2 * k22
    if 0.0 < a1 < C:
        b_new = b1
    elif 0.0 < a2 < C:
        b_new = b2
    else:
        b_new = (b1 + b2) / 2.0
    db = b_new - b

    E += (y1 * da1) * K[i1, :]
    E += (y2 * da2) * K[i2, :]
    E += db
    alpha[i1] = a1
    alpha[i2] = a2
    state["b"] = b_new
    return 1


def _pair_objective(a2, gamma, s, k11, k22, k12, y1, y2, v1, v2):
    a1 = gamma - s * a2
    return (0.5 * k11 * a1 * a1 + 0.5 * k22 * a2 * a2 + s * k12 * a1 * a2
            + y1 * a1 * v1 + y2 * a2 * v2 - a1 - a2)


def _examine(i2, K, y, alpha, C, tol, eps, state):
    n = alpha.shape[0]
    y2 = y[i2]
    a2 = alpha[i2]
    E2 = state["E"][i2]
    r2 = E2 * y2
    if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0.0)):
        return 0
    nonbound = (alpha > 0.0) & (alpha < C)
    if int(nonbound.sum()) > 1:
        diff = np.abs(state["E"] - E2)
        diff[~nonbound] = -1.0
        i1 = int(np.argmax(diff))
        if _take_step(i1, i2, K, y, alpha, C, eps, state):
            return 1
    for k in range(n):  # deterministic sweep in place of Platt's random start
        i1 = (i2 + 1 + k) % n
        if nonbound[i1] and _take_step(i1, i2, K, y, alpha, C, eps, state):
            return 1
    for k in range(n):
        i1 = (i2 + 1 + k) % n
        if _take_step(i1, i2, K, y, alpha, C, eps, state):
            return 1
    return 0


def smo_solve(K, y, C, tol, eps, max_steps):
    """Sequential minimal optimization for the two-class soft-margin dual.

    K: (n, n) float64 Gram matrix; y: (n,) float64 in {-1, +1}.
    Returns (alpha, b, steps, converged).  On normal termination every
    multiplier satisfies its KKT condition within `tol`.
    """
    n = K.shape[0]
    alpha = np.zeros(n, dtype=np.float64)
    state = {"E": -y.astype(np.float64).copy(), "b": 0.0}
    steps = 0
    examine_all = True
    num_changed = 1
    converged = True
    while num_changed > 0 or examine_all:
        num_changed = 0
        if examine_all:
            for i in range(n):
                num_changed += _examine(i, K, y, alpha, C, tol, eps, state)
        else:
            for i in range(n):
                if 0.0 < alpha[i] < C:
                    num_changed += _examine(i, K, y, alpha, C, tol, eps, state)
        steps += num_changed
        if steps > max_steps:
            converged = False
            break
        if examine_all:
            examine_all = False
        elif num_changed == 0:
            examine_all = True
    return alpha, float(state["b"]), steps, converged
