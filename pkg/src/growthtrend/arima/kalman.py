"""Exact Gaussian likelihood of a zero-mean ARMA(p, q) series.

The series is cast in Harvey's state-space form with state dimension
``r = max(p, q + 1)``::

    alpha[t+1] = T alpha[t] + R eps[t]
    z[t]       = alpha[t][0]

where ``T`` carries the AR coefficients in its first column and a shifted
identity above the diagonal, and ``R = (1, theta_1, ..., theta_{r-1})``.
The filter starts from the unconditional state covariance, obtained by
solving the discrete Lyapunov equation ``P = T P T' + R R'``, which makes
the likelihood exact rather than conditional.

The low-level routines filter with unit innovation variance and accept
several data columns at once.  The prediction variances do not depend on
the data, so a single pass whitens the response and every regressor column,
which is what the profile likelihood in :mod:`.model` needs.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..errors import NonStationaryParams, NumericalBreakdown
from .transform import is_invertible, is_stationary

LOG_2PI = math.log(2.0 * math.pi)
# once the prediction covariance moves less than this it is treated as settled
STEADY_TOL = 1e-15


@njit(cache=True)
def _system(ar, ma):
    p = ar.shape[0]
    q = ma.shape[0]
    r = max(p, q + 1)
    T = np.zeros((r, r))
    for i in range(p):
        T[i, 0] = ar[i]
    for i in range(r - 1):
        T[i, i + 1] = 1.0
    R = np.zeros(r)
    R[0] = 1.0
    for i in range(q):
        R[i + 1] = ma[i]
    return T, R


@njit(cache=True)
def _initial_cov(T, R):
    """Solve the Lyapunov equation ``P = T P T' + R R'``.

    Only the ``r (r + 1) / 2`` entries on and above the diagonal are unknown.
    Because ``T`` is a companion matrix each equation couples at most four of
    them::

        (T P T')[i, j] = phi_i phi_j P[0, 0] + phi_i P[0, j+1]
                         + phi_j P[i+1, 0] + P[i+1, j+1]

    (entries with an index equal to ``r`` are zero).  The small dense system
    is solved by Gaussian elimination with partial pivoting.
    """
    r = T.shape[0]
    idx = np.full((r + 1, r + 1), -1, dtype=np.int64)
    m = 0
    for i in range(r):
        for j in range(i, r):
            idx[i, j] = m
            idx[j, i] = m
            m += 1
    A = np.zeros((m, m + 1))
    for i in range(r):
        phi_i = T[i, 0]
        for j in range(i, r):
            phi_j = T[j, 0]
            row = idx[i, j]
            A[row, row] += 1.0
            A[row, m] = R[i] * R[j]
            A[row, idx[0, 0]] -= phi_i * phi_j
            if j + 1 < r:
                A[row, idx[0, j + 1]] -= phi_i
            if i + 1 < r:
                A[row, idx[i + 1, 0]] -= phi_j
            if i + 1 < r and j + 1 < r:
                A[row, idx[i + 1, j + 1]] -= 1.0
    for col in range(m):
        piv = col
        best = abs(A[col, col])
        for row in range(col + 1, m):
            v = abs(A[row, col])
            if v > best:
                best = v
                piv = row
        if piv != col:
            for c in range(col, m + 1):
                tmp = A[col, c]
                A[col, c] = A[piv, c]
                A[piv, c] = tmp
        d = A[col, col]
        for row in range(col + 1, m):
            f = A[row, col]
            if f == 0.0:
                continue
            f /= d
            for c in range(col, m + 1):
                A[row, c] -= f * A[col, c]
    x = np.zeros(m)
    for row in range(m - 1, -1, -1):
        s = A[row, m]
        for c in range(row + 1, m):
            s -= A[row, c] * x[c]
        x[row] = s / A[row, row]
    P = np.empty((r, r))
    for i in range(r):
        for j in range(r):
            P[i, j] = x[idx[i, j]]
    return P


@njit(cache=True)
def _whiten(Y, ar, ma):
    """Filter every column of ``Y`` with unit innovation variance.

    Returns ``(W, sum_log_f, ok)`` where ``W[t] = v[t] / sqrt(F[t])`` are the
    standardized one-step prediction errors and ``ok`` is False when a
    prediction variance is not strictly positive.
    """
    n, m = Y.shape
    T, R = _system(ar, ma)
    r = T.shape[0]
    W = np.empty((n, m))
    if r == 1 and ar.shape[0] == 0:
        # white noise: F == 1 throughout
        for t in range(n):
            for c in range(m):
                W[t, c] = Y[t, c]
        return W, 0.0, True

    P0 = _initial_cov(T, R)
    # P is padded with a zero row and column so that the shift part of the
    # companion matrix needs no bounds test: (T X)[i] = phi[i] X[0] + X[i + 1]
    P = np.zeros((r + 1, r + 1))
    P_next = np.zeros((r + 1, r + 1))
    for i in range(r):
        for j in range(r):
            P[i, j] = P0[i, j]
    phi = np.zeros(r + 1)
    for i in range(ar.shape[0]):
        phi[i] = ar[i]
    RR = np.zeros((r, r))
    for i in range(r):
        for j in range(r):
            RR[i, j] = R[i] * R[j]
    a = np.zeros((r + 1, m))
    g = np.zeros(r)
    K = np.zeros(r)
    v = np.zeros(m)
    sum_log_f = 0.0
    steady = False
    for t in range(n):
        F = P[0, 0]
        if not (F > 0.0) or not np.isfinite(F):
            return W, 0.0, False
        sqrt_f = math.sqrt(F)
        if not steady:
            for i in range(r):
                g[i] = phi[i] * F + P[i + 1, 0]
                K[i] = g[i] / F
        sum_log_f += math.log(F)
        for c in range(m):
            vc = Y[t, c] - a[0, c]
            v[c] = vc
            W[t, c] = vc / sqrt_f
            a0 = a[0, c]
            for i in range(r):
                a[i, c] = phi[i] * a0 + a[i + 1, c] + K[i] * vc
        if steady:
            continue
        change = 0.0
        inv_f = 1.0 / F
        for i in range(r):
            pi = phi[i]
            for j in range(i, r):
                pj = phi[j]
                s = (
                    pi * pj * F
                    + pi * P[0, j + 1]
                    + pj * P[i + 1, 0]
                    + P[i + 1, j + 1]
                    + RR[i, j]
                    - g[i] * g[j] * inv_f
                )
                d = abs(s - P[i, j])
                if d > change:
                    change = d
                P_next[i, j] = s
                P_next[j, i] = s
        P, P_next = P_next, P
        steady = change <= STEADY_TOL * F
    return W, sum_log_f, True


def kalman_loglik(z, ar, ma, sigma2: float) -> float:
    """Exact Gaussian log-likelihood of ``z`` under a zero-mean ARMA model.

    Parameters
    ----------
    z : array_like
        Regressor-adjusted differenced series.
    ar, ma : array_like
        Coefficients of ``1 - ar_1 B - ...`` and ``1 + ma_1 B + ...``.
    sigma2 : float
        Innovation variance.
    """
    z = np.asarray(z, dtype=float)
    ar = np.asarray(ar, dtype=float).reshape(-1)
    ma = np.asarray(ma, dtype=float).reshape(-1)
    if not is_stationary(ar):
        raise NonStationaryParams(f"AR coefficients {ar.tolist()} are not stationary")
    if not is_invertible(ma):
        raise NonStationaryParams(f"MA coefficients {ma.tolist()} are not invertible")
    if not sigma2 > 0:
        raise NumericalBreakdown(f"innovation variance must be positive, got {sigma2}")
    W, sum_log_f, ok = _whiten(z.reshape(-1, 1), ar, ma)
    if not ok:
        raise NumericalBreakdown("non-positive prediction variance in Kalman filter")
    n = z.shape[0]
    ssq = float(W[:, 0] @ W[:, 0])
    return -0.5 * (n * LOG_2PI + n * math.log(sigma2) + sum_log_f + ssq / sigma2)
