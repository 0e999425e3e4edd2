"""Map unconstrained reals onto stationary AR / invertible MA coefficients.

Each raw value is squashed by ``tanh`` into a partial autocorrelation in
(-1, 1); the Durbin-Levinson recursion then turns the partial
autocorrelations into polynomial coefficients.  Every stationary AR
polynomial is reachable, so the optimizer never has to deal with
constraints.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# tanh(RAW_CLIP) is still strictly below 1 in double precision
RAW_CLIP = 15.0


@njit(cache=True)
def _pacf_to_coef(raw):
    k = raw.shape[0]
    coef = np.zeros(k)
    prev = np.zeros(k)
    for j in range(k):
        x = raw[j]
        if x > RAW_CLIP:
            x = RAW_CLIP
        elif x < -RAW_CLIP:
            x = -RAW_CLIP
        a = np.tanh(x)
        for i in range(j):
            prev[i] = coef[i]
        for i in range(j):
            coef[i] = prev[i] - a * prev[j - 1 - i]
        coef[j] = a
    return coef


@njit(cache=True)
def _constrain(raw, p, q):
    ar = _pacf_to_coef(raw[:p])
    ma = -_pacf_to_coef(raw[p:p + q])
    return ar, ma


def _coef_to_pacf(coef: np.ndarray) -> np.ndarray:
    coef = np.array(coef, dtype=float)
    k = coef.shape[0]
    pacf = np.zeros(k)
    for j in range(k - 1, -1, -1):
        a = coef[j]
        pacf[j] = a
        if j == 0:
            break
        if abs(a) >= 1.0:
            raise ValueError("coefficients are not strictly stationary")
        coef = (coef[:j] + a * coef[:j][::-1]) / (1.0 - a * a)
    return pacf


def constrain(raw, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(ar, ma)`` for a raw vector of length ``p + q``.

    AR coefficients follow ``1 - ar[0] z - ... - ar[p-1] z^p``; MA coefficients
    follow ``1 + ma[0] z + ... + ma[q-1] z^q``.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (p + q,):
        raise ValueError(f"raw vector has shape {raw.shape}, expected ({p + q},)")
    return _constrain(raw, p, q)


def unconstrain(ar, ma) -> np.ndarray:
    """Inverse of :func:`constrain` (up to the raw clipping range)."""
    parts = []
    for coef in (np.asarray(ar, dtype=float), -np.asarray(ma, dtype=float)):
        pacf = _coef_to_pacf(coef)
        if np.any(np.abs(pacf) >= 1.0):
            raise ValueError("coefficients are not strictly stationary/invertible")
        parts.append(np.arctanh(pacf))
    return np.concatenate(parts)


def _lag_roots(coefs: np.ndarray) -> np.ndarray:
    """Roots of ``1 + coefs[0] z + ... + coefs[k-1] z^k``.

    Computed as reciprocals of the roots of the reversed (monic) polynomial,
    which stays well conditioned when the top coefficient is tiny; a zero
    reciprocal root just means the degree is lower.
    """
    if coefs.size == 0 or not np.any(coefs):
        return np.array([], dtype=complex)
    inv = np.roots(np.r_[1.0, coefs])
    inv = inv[inv != 0]
    with np.errstate(over="ignore"):
        return 1.0 / inv.astype(complex)


def ar_roots(ar) -> np.ndarray:
    """Roots of ``1 - ar[0] z - ... - ar[p-1] z^p``."""
    return _lag_roots(-np.asarray(ar, dtype=float))


def ma_roots(ma) -> np.ndarray:
    """Roots of ``1 + ma[0] z + ... + ma[q-1] z^q``."""
    return _lag_roots(np.asarray(ma, dtype=float))


def min_root_modulus(roots: np.ndarray) -> float:
    return float(np.min(np.abs(roots))) if roots.size else float("inf")


def is_stationary(ar) -> bool:
    return min_root_modulus(ar_roots(ar)) > 1.0


def is_invertible(ma) -> bool:
    return min_root_modulus(ma_roots(ma)) > 1.0
