# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot numeric kernels.

Mirrors `pure` operation-for-operation (same accumulation order, same
tie-breaking) so both backends return identical results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

NAME = "native"

cdef double _SNAP = 1e-8


def split_search(X, y, w, feat_idx, long min_leaf):
    """Best weighted-Gini split; see the pure backend for the contract."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.int64_t[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.int64_t[::1] fv = np.ascontiguousarray(feat_idx, dtype=np.int64)
    cdef Py_ssize_t n = Xv.shape[0]
    cdef Py_ssize_t i, j, fpos, idx
    cdef long f
    cdef double tot0 = 0.0, tot1 = 0.0, tot
    cdef double cl0, cl1, l0, l1, wl, r0, r1, wr, score, thr
    cdef double best_score, best_thr, decrease
    cdef long best_feat = -1
    cdef cnp.int64_t[::1] order
    cdef double yf

    if n < 2 * min_leaf:
        return -1, 0.0, 0.0
    for i in range(n):
        yf = <double> yv[i]
        tot0 = tot0 + wv[i] * (1.0 - yf)
        tot1 = tot1 + wv[i] * yf
    tot = tot0 + tot1
    if tot <= 0.0:
        return -1, 0.0, 0.0

    best_score = -np.inf
    best_thr = 0.0
    for fpos in range(fv.shape[0]):
        f = fv[fpos]
        col = np.asarray(Xv[:, f])
        order = np.argsort(col, kind="stable")
        cl0 = 0.0
        cl1 = 0.0
        for j in range(n - 1):
            idx = order[j]
            yf = <double> yv[idx]
            cl0 = cl0 + wv[idx] * (1.0 - yf)
            cl1 = cl1 + wv[idx] * yf
            if Xv[idx, f] >= Xv[order[j + 1], f]:
                continue
            if j + 1 < min_leaf or n - j - 1 < min_leaf:
                continue
            l0 = cl0
            l1 = cl1
            wl = l0 + l1
            r0 = tot0 - l0
            r1 = tot1 - l1
            wr = tot - wl
            if wl <= 0.0 or wr <= 0.0:
                continue
            score = (l0 * l0 + l1 * l1) / wl + (r0 * r0 + r1 * r1) / wr
            if score > best_score or (score == best_score and f < best_feat):
                best_score = score
                best_feat = f
                thr = (Xv[idx, f] + Xv[order[j + 1], f]) / 2.0
                if thr >= Xv[order[j + 1], f]:
                    thr = Xv[idx, f]
                best_thr = thr
    if best_feat < 0:
        return -1, 0.0, 0.0
    decrease = best_score / tot - (tot0 * tot0 + tot1 * tot1) / (tot * tot)
    return best_feat, best_thr, decrease


cdef double _pair_objective(double a2, double gamma, double s,
                            double k11, double k22, double k12,
                            double y1, double y2, double v1, double v2) noexcept:
    cdef double a1 = gamma - s * a2
    return (0.5 * k11 * a1 * a1 + 0.5 * k22 * a2 * a2 + s * k12 * a1 * a2
            + y1 * a1 * v1 + y2 * a2 * v2 - a1 - a2)


cdef int _take_step(Py_ssize_t i1, Py_ssize_t i2, double[:, ::1] K,
                    double[::1] y, double[::1] alpha, double C, double eps,
                    double[::1] E, double* b_ptr):
    cdef double a1o, a2o, y1, y2, E1, E2, s, L, H
    cdef double k11, k12, k22, eta, a2, a1, gamma, v1, v2, obj_l, obj_h
    cdef double da1, da2, b1, b2, b_new, db, c1, c2, b
    cdef Py_ssize_t j, n = alpha.shape[0]

    if i1 == i2:
        return 0
    b = b_ptr[0]
    a1o = alpha[i1]
    a2o = alpha[i2]
    y1 = y[i1]
    y2 = y[i2]
    E1 = E[i1]
    E2 = E[i2]
    s = y1 * y2
    if s > 0.0:
        L = a1o + a2o - C
        if L < 0.0:
            L = 0.0
        H = a1o + a2o
        if H > C:
            H = C
    else:
        L = a2o - a1o
        if L < 0.0:
            L = 0.0
        H = C + a2o - a1o
        if H > C:
            H = C
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
    if fabs(a2 - a2o) < eps * (a2 + a2o + eps):
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

    c1 = y1 * da1
    c2 = y2 * da2
    for j in range(n):
        E[j] = E[j] + c1 * K[i1, j]
        E[j] = E[j] + c2 * K[i2, j]
        E[j] = E[j] + db
    alpha[i1] = a1
    alpha[i2] = a2
    b_ptr[0] = b_new
    return 1


cdef int _examine(Py_ssize_t i2, double[:, ::1] K, double[::1] y,
                  double[::1] alpha, double C, double tol, double eps,
                  double[::1] E, double* b_ptr, cnp.uint8_t[::1] nb):
    cdef Py_ssize_t n = alpha.shape[0]
    cdef double y2 = y[i2]
    cdef double a2 = alpha[i2]
    cdef double E2 = E[i2]
    cdef double r2 = E2 * y2
    cdef Py_ssize_t j, k, i1, count
    cdef double best, val

    if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0.0)):
        return 0
    count = 0
    for j in range(n):
        if alpha[j] > 0.0 and alpha[j] < C:
            nb[j] = 1
            count += 1
        else:
            nb[j] = 0
    if count > 1:
        best = -1.0
        i1 = 0
        for j in range(n):
            if nb[j]:
                val = fabs(E[j] - E2)
            else:
                val = -1.0
            if val > best:
                best = val
                i1 = j
        if _take_step(i1, i2, K, y, alpha, C, eps, E, b_ptr):
            return 1
    for k in range(n):
        i1 = (i2 + 1 + k) % n
        if nb[i1] and _take_step(i1, i2, K, y, alpha, C, eps, E, b_ptr):
            return 1
    for k in range(n):
        i1 = (i2 + 1 + k) % n
        if _take_step(i1, i2, K, y, alpha, C, eps, E, b_ptr):
            return 1
    return 0


def smo_solve(K, y, double C, double tol, double eps, long max_steps):
    """SMO for the two-class soft-margin dual; see the pure backend."""
    cdef double[:, ::1] Kv = np.ascontiguousarray(K, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Kv.shape[0]
    alpha_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr
    E_arr = -np.ascontiguousarray(y, dtype=np.float64).copy()
    cdef double[::1] E = E_arr
    nb_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] nb = nb_arr
    cdef double b = 0.0
    cdef long steps = 0
    cdef int examine_all = 1
    cdef int converged = 1
    cdef long num_changed = 1
    cdef Py_ssize_t i

    while num_changed > 0 or examine_all:
        num_changed = 0
        if examine_all:
            for i in range(n):
                num_changed += _examine(i, Kv, yv, alpha, C, tol, eps, E, &b, nb)
        else:
            for i in range(n):
                if 0.0 < alpha[i] < C:
                    num_changed += _examine(i, Kv, yv, alpha, C, tol, eps, E, &b, nb)
        steps += num_changed
        if steps > max_steps:
            converged = 0
            break
        if examine_all:
            examine_all = 0
        elif num_changed == 0:
            examine_all = 1
    return alpha_arr, b, steps, bool(converged)
