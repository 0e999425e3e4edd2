"""Nelder-Mead simplex minimizer compiled with numba.

The objective is bound at module level rather than passed in: numba cannot
cache a compiled function that takes another compiled function as an
argument, and recompiling in every process costs seconds.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .objective import profile_nll as f

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@njit(cache=True)
def _sort(sim, fs):
    order = np.argsort(fs)
    return sim[order].copy(), fs[order].copy()


@njit(cache=True)
def nelder_mead(x0, step, data, p, q, maxiter, xtol, ftol, adaptive=False):
    """Minimize the profiled likelihood ``f(x, data, p, q)`` from ``x0``.

    With ``adaptive`` the expansion, contraction and shrink coefficients
    depend on the dimension (Gao and Han, 2012), which holds up better than
    the classic constants beyond two or three parameters.  For ``n <= 2``
    the two coincide, except that ``n == 1`` always uses the classic ones.

    Stops when the simplex has shrunk to ``xtol`` in every coordinate, or when
    the function values across the simplex agree to ``ftol`` (a flat
    plateau, typical when a partial autocorrelation saturates).

    Returns ``(x_best, f_best, n_iter, converged)``.
    """
    n = x0.shape[0]
    if adaptive and n > 1:
        rho, chi, psi, sigma = 1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n
    else:
        rho, chi, psi, sigma = REFLECT, EXPAND, CONTRACT, SHRINK
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    for i in range(n + 1):
        sim[i] = x0
        if i > 0:
            sim[i, i - 1] += step
        fs[i] = f(sim[i], data, p, q)

    centroid = np.empty(n)
    converged = False
    it = 0
    while True:
        sim, fs = _sort(sim, fs)
        xspread = 0.0
        for i in range(1, n + 1):
            for j in range(n):
                d = abs(sim[i, j] - sim[0, j])
                if d > xspread:
                    xspread = d
        fspread = fs[n] - fs[0]
        if xspread <= xtol or (np.isfinite(fspread) and fspread <= ftol):
            converged = True
            break
        if it >= maxiter:
            break
        it += 1

        for j in range(n):
            s = 0.0
            for i in range(n):
                s += sim[i, j]
            centroid[j] = s / n
        worst = sim[n]
        xr = centroid + rho * (centroid - worst)
        fr = f(xr, data, p, q)
        if fr < fs[0]:
            xe = centroid + chi * (xr - centroid)
            fe = f(xe, data, p, q)
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
            continue
        if fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
            continue
        if fr < fs[n]:
            xc = centroid + psi * (xr - centroid)
            fc = f(xc, data, p, q)
            if fc <= fr:
                sim[n] = xc
                fs[n] = fc
                continue
        else:
            xc = centroid + psi * (worst - centroid)
            fc = f(xc, data, p, q)
            if fc < fs[n]:
                sim[n] = xc
                fs[n] = fc
                continue
        for i in range(1, n + 1):
            sim[i] = sim[0] + sigma * (sim[i] - sim[0])
            fs[i] = f(sim[i], data, p, q)

    return sim[0].copy(), fs[0], it, converged
