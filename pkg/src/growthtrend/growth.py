"""Growth-rate grid, trend regressors and the R-squared curve-fit comparison."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import CountrySeries
from .errors import BadGridConfig, RankDeficient, ZeroVariance

DEFAULT_POINTS = 50
DEFAULT_MAX_RATE = 0.06


@dataclass(frozen=True)
class GrowthGrid:
    rates: tuple[float, ...]

    def __post_init__(self):
        rates = tuple(float(r) for r in self.rates)
        object.__setattr__(self, "rates", rates)
        if not rates or rates[0] != 0.0:
            raise BadGridConfig("grid must start at exactly 0.0")
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise BadGridConfig("grid rates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.rates)

    def __iter__(self):
        return iter(self.rates)

    @property
    def step(self) -> float:
        return self.rates[1] - self.rates[0] if len(self.rates) > 1 else 0.0


@dataclass(frozen=True)
class R2Comparison:
    id: str
    r2_exp: float
    best_rate: float
    r2_lin: float
    diff: float


def build_grid(n_points: int = DEFAULT_POINTS, max_rate: float = DEFAULT_MAX_RATE) -> GrowthGrid:
    """``n_points`` equally spaced growth rates from 0 to ``max_rate`` inclusive."""
    if int(n_points) != n_points or n_points < 2:
        raise BadGridConfig(f"need at least 2 grid points, got {n_points}")
    if not (np.isfinite(max_rate) and max_rate > 0):
        raise BadGridConfig(f"max rate must be positive, got {max_rate}")
    rates = np.linspace(0.0, max_rate, int(n_points))
    rates[0] = 0.0
    rates[-1] = max_rate
    return GrowthGrid(tuple(rates))


def exp_regressor(rate: float, n: int) -> np.ndarray:
    """``(1 + rate) ** t`` for ``t = 0 .. n-1``."""
    if rate < 0:
        raise ValueError("rate must be non-negative")
    return (1.0 + rate) ** np.arange(n, dtype=float)


def ols_r2(y, X) -> float:
    """Centered R-squared of an OLS fit of ``y`` on ``X`` (which must hold an intercept)."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n != y.shape[0] or n < k + 1:
        raise RankDeficient(f"{n} observations for {k} columns")
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        raise ZeroVariance("response is constant")
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0) or np.linalg.matrix_rank(X / norms) < k:
        raise RankDeficient("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return 1.0 - float(resid @ resid) / sst


def compare_fits(series: CountrySeries, grid: GrowthGrid) -> R2Comparison:
    """Best exponential curve fit over the grid against the straight-line fit.

    Both fits carry an intercept.  Zero is skipped in the exponential sweep
    because its regressor is constant; the straight line stands for it.
    """
    y = np.asarray(series.values, dtype=float)
    n = y.shape[0]
    t = np.arange(n, dtype=float)
    ones = np.ones(n)
    r2_lin = ols_r2(y, np.column_stack([ones, t]))

    best_rate, r2_exp = None, -np.inf
    for rate in grid.rates:
        if rate == 0.0:
            continue
        r2 = ols_r2(y, np.column_stack([ones, exp_regressor(rate, n)]))
        if r2 > r2_exp:
            best_rate, r2_exp = rate, r2
    if best_rate is None:
        raise RankDeficient("grid has no positive growth rate to fit")
    return R2Comparison(series.id, r2_exp, best_rate, r2_lin, r2_lin - r2_exp)
