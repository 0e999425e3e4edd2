"""Profiled Gaussian negative log-likelihood, the quantity the optimizer minimizes.

``Y`` packs the scaled response in column 0 and the orthonormalized
regressors in the remaining columns.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .kalman import LOG_2PI, _whiten
from .transform import _constrain


@njit(cache=True)
def _gls(W, k):
    """GLS coefficients and residual sum of squares from whitened data.

    Column 0 of ``W`` is the whitened response, columns 1..k the whitened
    regressors.  Solves the k x k normal equations by Cholesky.
    """
    n = W.shape[0]
    G = np.zeros((k, k))
    b = np.zeros(k)
    yy = 0.0
    for t in range(n):
        y = W[t, 0]
        yy += y * y
        for i in range(k):
            xi = W[t, i + 1]
            b[i] += xi * y
            for j in range(i + 1):
                G[i, j] += xi * W[t, j + 1]
    L = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1):
            s = G[i, j]
            for l in range(j):
                s -= L[i, l] * L[j, l]
            if i == j:
                if not s > 0.0:
                    return np.zeros(k), np.nan
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    u = np.zeros(k)
    for i in range(k):
        s = b[i]
        for l in range(i):
            s -= L[i, l] * u[l]
        u[i] = s / L[i, i]
    gamma = np.zeros(k)
    for i in range(k - 1, -1, -1):
        s = u[i]
        for l in range(i + 1, k):
            s -= L[l, i] * gamma[l]
        gamma[i] = s / L[i, i]
    # SSR = y'y - u'u for the Cholesky-projected fit
    ssr = yy
    for i in range(k):
        ssr -= u[i] * u[i]
    if ssr < 0.0:
        ssr = 0.0
    return gamma, ssr


@njit(cache=True)
def profile_nll(raw, Y, p, q):
    """Negative log-likelihood with beta and sigma2 profiled out."""
    ar, ma = _constrain(raw, p, q)
    W, sum_log_f, ok = _whiten(Y, ar, ma)
    if not ok:
        return np.inf
    n = Y.shape[0]
    _, ssr = _gls(W, Y.shape[1] - 1)
    if not ssr > 0.0:
        return np.inf
    return 0.5 * (n * (LOG_2PI + 1.0 + math.log(ssr / n)) + sum_log_f)
