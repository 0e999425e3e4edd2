"""ARIMA(p, 1, q) with regressors: exact maximum likelihood.

The model for the differenced series ``dz`` is ``dz = X beta + u`` with ``u``
a zero-mean ARMA(p, q) process.  For fixed ARMA coefficients the regression
coefficients and the innovation variance have closed-form maximizers
(generalized least squares on the Kalman-whitened data), so the optimizer
only searches over the ``p + q`` unconstrained ARMA parameters.  The result
is the same joint maximum as searching over everything at once.

Internally the response is divided by its root mean square and the design is
replaced by an orthonormal basis of its column space; both are undone before
results are reported.  This keeps the search identical (up to rounding) for
rescaled inputs and keeps nearly collinear regressors well conditioned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from ..errors import (
    DegenerateDesign,
    InsufficientData,
    SingularHessian,
    TooShort,
    UnknownCoefficient,
    ZeroVariance,
)
from .kalman import LOG_2PI, _whiten
from .neldermead import nelder_mead
from .objective import _gls, profile_nll
from .transform import _constrain, ar_roots, ma_roots, min_root_modulus

N_STARTS = 5
START_SCALE = 0.7
SIMPLEX_STEP = 0.5
XTOL = 1e-8
FTOL = 1e-8
ITER_PER_DIM = 200
# residual mean square (relative to that of dz) below which nothing is left to model
MIN_REL_SSR = 1e-12


@dataclass(frozen=True, order=True)
class ArimaOrder:
    p: int
    d: int = 1
    q: int = 0

    def __post_init__(self):
        if self.d != 1:
            raise ValueError("only d == 1 is supported")
        if self.p < 0 or self.q < 0:
            raise ValueError("orders must be non-negative")

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class RegressionDesign:
    names: tuple[str, ...] = ()
    columns: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        cols = tuple(np.asarray(c, dtype=float).reshape(-1) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != len(cols):
            raise ValueError("one name per column required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("column names must be unique")
        if cols and len({c.shape[0] for c in cols}) != 1:
            raise ValueError("design columns differ in length")

    def __len__(self) -> int:
        return len(self.columns)

    def matrix(self, n: int) -> np.ndarray:
        if not self.columns:
            return np.zeros((n, 0))
        X = np.column_stack(self.columns)
        if X.shape[0] != n:
            raise ValueError(f"design has {X.shape[0]} rows, series has {n}")
        return X


@dataclass(frozen=True)
class FitResult:
    order: ArimaOrder
    ar: tuple[float, ...]
    ma: tuple[float, ...]
    beta: dict
    sigma2: float
    loglik: float
    n_obs: int
    k_params: int
    converged: bool
    ar_root_min_modulus: float
    ma_root_min_modulus: float
    n_iter: int = 0
    # kept for t_ratio; excluded from comparisons
    _raw: np.ndarray = field(default=None, repr=False, compare=False)
    _dz: np.ndarray = field(default=None, repr=False, compare=False)
    _X: np.ndarray = field(default=None, repr=False, compare=False)


def difference(values: Sequence[float]) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 2:
        raise TooShort("need at least two values to difference")
    return np.diff(values)


def _nll_full(theta: np.ndarray, y: np.ndarray, Q: np.ndarray, p: int, q: int) -> float:
    """Negative log-likelihood in (raw ARMA, gamma) with only sigma2 profiled."""
    raw, gamma = theta[: p + q], theta[p + q:]
    ar, ma = _constrain(raw, p, q)
    resid = y - Q @ gamma
    W, sum_log_f, ok = _whiten(resid.reshape(-1, 1), ar, ma)
    if not ok:
        return np.inf
    n = y.shape[0]
    ssr = float(W[:, 0] @ W[:, 0])
    return 0.5 * (n * (LOG_2PI + 1.0 + math.log(ssr / n)) + sum_log_f)


def _prepare(dz: np.ndarray, X: np.ndarray):
    scale = float(np.sqrt(np.mean(dz * dz)))
    if not scale > 0:
        scale = 1.0
    if X.shape[1]:
        Q, Rm = np.linalg.qr(X)
    else:
        Q, Rm = X, np.zeros((0, 0))
    Y = np.ascontiguousarray(np.column_stack([dz / scale, Q]))
    return Y, Q, Rm, scale


def fit(dz, design: RegressionDesign, order: ArimaOrder, seed: int = 0) -> FitResult:
    """Maximum-likelihood fit of an ARMA(p, q) with regressors to ``dz``.

    Multi-start Nelder-Mead over the unconstrained ARMA parameters: the zero
    vector plus ``N_STARTS - 1`` normal perturbations drawn from ``seed``.
    Hitting the iteration budget is reported through ``converged``, never
    raised.
    """
    dz = np.asarray(dz, dtype=float).reshape(-1)
    n = dz.shape[0]
    p, q = order.p, order.q
    k = len(design)
    if n < p + q + k + 2:
        raise InsufficientData(
            f"{n} observations cannot support order {order} with {k} regressors"
        )
    X = design.matrix(n)
    if k:
        norms = np.linalg.norm(X, axis=0)
        if np.any(norms == 0) or np.linalg.matrix_rank(X / norms) < k:
            raise DegenerateDesign(f"regressors {design.names} are collinear")

    Y, Q, Rm, scale = _prepare(dz, X)
    resid = Y[:, 0] - Q @ (Q.T @ Y[:, 0])
    if not resid @ resid > MIN_REL_SSR * n:
        raise ZeroVariance("the regressors explain the differenced series exactly")
    dim = p + q
    if dim == 0:
        raw_best = np.zeros(0)
        nll = profile_nll(raw_best, Y, 0, 0)
        converged, n_iter = True, 0
    else:
        rng = np.random.default_rng(seed)
        starts = [np.zeros(dim)] + [
            rng.normal(0.0, START_SCALE, dim) for _ in range(N_STARTS - 1)
        ]
        best = None
        for x0 in starts:
            res = nelder_mead(x0, SIMPLEX_STEP, Y, p, q, ITER_PER_DIM * dim, XTOL, FTOL, True)
            if best is None or res[1] < best[1]:
                best = res
        raw_best, nll, n_iter, converged = best
        raw_best = np.asarray(raw_best)

    if not np.isfinite(nll):
        converged = False
    ar, ma = _constrain(raw_best, p, q)
    W, _, _ = _whiten(Y, ar, ma)
    gamma, ssr = _gls(W, k)
    beta_vec = scale * np.linalg.solve(Rm, gamma) if k else np.zeros(0)
    sigma2 = scale**2 * ssr / n
    loglik = -nll - n * math.log(scale)

    return FitResult(
        order=order,
        ar=tuple(float(x) for x in ar),
        ma=tuple(float(x) for x in ma),
        beta={name: float(b) for name, b in zip(design.names, beta_vec)},
        sigma2=float(sigma2),
        loglik=float(loglik),
        n_obs=n,
        k_params=p + q + k + 1,
        converged=bool(converged),
        ar_root_min_modulus=min_root_modulus(ar_roots(ar)),
        ma_root_min_modulus=min_root_modulus(ma_roots(ma)),
        n_iter=int(n_iter),
        _raw=raw_best,
        _dz=dz,
        _X=X,
    )


def _hessian(f, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    H = np.empty((d, d))
    f0 = f(x)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(d)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return H


def coef_cov(fit_result: FitResult) -> np.ndarray:
    """Covariance of the regression coefficients from the observed information.

    The Hessian of the negative log-likelihood is taken numerically in the
    unconstrained ARMA coordinates and the orthonormalized regression
    coordinates.  The regression block of its inverse does not depend on how
    the ARMA part is parameterized, so the unconstrained coordinates are used
    to stay clear of the stationarity boundary.  Flat ARMA directions (a
    saturated partial autocorrelation) carry no information about the
    regression coefficients and are dropped via a pseudo-inverse.
    """
    fr = fit_result
    p, q = fr.order.p, fr.order.q
    k = len(fr.beta)
    if k == 0:
        return np.zeros((0, 0))
    Y, Q, Rm, scale = _prepare(fr._dz, fr._X)
    y = Y[:, 0]
    ar, ma = _constrain(fr._raw, p, q)
    W, _, _ = _whiten(Y, ar, ma)
    gamma, _ = _gls(W, k)
    theta = np.r_[fr._raw, gamma]
    h = 1e-4 * np.maximum(1.0, np.abs(theta))
    H = _hessian(lambda t: _nll_full(t, y, Q, p, q), theta, h)
    if not np.all(np.isfinite(H)):
        raise SingularHessian("Hessian has non-finite entries")
    m = p + q
    H_gg = H[m:, m:]
    if m:
        H_ga = H[m:, :m]
        H_aa = H[:m, :m]
        H_gg = H_gg - H_ga @ np.linalg.pinv(H_aa, rcond=1e-10, hermitian=True) @ H_ga.T
    try:
        eig = np.linalg.eigvalsh(H_gg)
    except np.linalg.LinAlgError as exc:
        raise SingularHessian(str(exc)) from None
    if eig.min() <= 1e-12 * max(1.0, abs(eig.max())):
        raise SingularHessian("information matrix for regression coefficients is not positive definite")
    cov_gamma = np.linalg.inv(H_gg)
    Rinv = np.linalg.inv(Rm)
    return scale**2 * Rinv @ cov_gamma @ Rinv.T


def t_ratio(fit_result: FitResult, coef_name: str) -> float:
    """Coefficient divided by its standard error."""
    names = list(fit_result.beta)
    if coef_name not in names:
        raise UnknownCoefficient(coef_name)
    cov = coef_cov(fit_result)
    i = names.index(coef_name)
    se = math.sqrt(cov[i, i])
    return fit_result.beta[coef_name] / se
