"""Two-step model selection over the growth-rate grid.

Step one picks, at each candidate growth rate, the ARIMA(p, 1, q) order with
the lowest information criterion.  Step two picks the growth rate whose
step-one model has the lowest criterion.  The three criteria share one set of
fits; they differ only in the penalty applied to the same log-likelihood.

The model for the differenced levels at growth rate ``r`` is::

    dy[t] = drift + b0 * r * (1 + r) ** (t - 1) + u[t],   u ~ ARMA(p, q)

which is the first difference of ``a + drift * t + b0 * (1 + r) ** t`` plus an
integrated ARMA disturbance.  At ``r == 0`` the exponential column vanishes and
the model is the plain linear trend, one parameter smaller.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .arima import ArimaOrder, FitResult, RegressionDesign, difference, fit, t_ratio
from .dataio import CountrySeries, SampleWindow, window
from .errors import (
    AICcUndefined,
    AllFitsFailed,
    ComputationError,
    GrowthTrendError,
    InputError,
)
from .growth import GrowthGrid, exp_regressor

log = logging.getLogger(__name__)

DEFAULT_P_MAX = 3
DEFAULT_Q_MAX = 3
# criterion values closer than this are ties and resolved by the tie-break order
TIE_TOL = 1e-8
# smallest AR root modulus below which a chosen fit is flagged as near unit root
NEAR_UNIT_ROOT = 1.01
T_CRIT = 1.96
DRIFT = "drift"
B0 = "b0"


class Criterion(str, Enum):
    AIC = "AIC"
    AICC = "AICc"
    BIC = "BIC"

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        for c in cls:
            if text.lower() in (c.value.lower(), c.name.lower()):
                return c
        raise ValueError(f"unknown criterion {text!r}")


@dataclass(frozen=True)
class CriterionScores:
    aic: float
    aicc: float
    bic: float

    def __getitem__(self, criterion: Criterion) -> float:
        return getattr(self, Criterion(criterion).key)


def information_criteria(loglik: float, k: int, n: int) -> CriterionScores:
    if n <= k + 1:
        raise AICcUndefined(f"AICc needs n > k + 1, got n={n}, k={k}")
    aic = 2.0 * k - 2.0 * loglik
    return CriterionScores(
        aic=aic,
        aicc=aic + 2.0 * k * (k + 1) / (n - k - 1),
        bic=k * math.log(n) - 2.0 * loglik,
    )


def score(fit_result: FitResult) -> CriterionScores:
    return information_criteria(fit_result.loglik, fit_result.k_params, fit_result.n_obs)


def _lenient_score(fit_result: FitResult) -> CriterionScores:
    try:
        return score(fit_result)
    except AICcUndefined:
        k, n, ll = fit_result.k_params, fit_result.n_obs, fit_result.loglik
        return CriterionScores(2.0 * k - 2.0 * ll, math.inf, k * math.log(n) - 2.0 * ll)


def trend_design(n_levels: int, rate: float) -> RegressionDesign:
    """Regressors for the differenced series: drift, plus the differenced
    exponential trend when ``rate > 0``."""
    drift = np.ones(n_levels - 1)
    if rate == 0.0:
        return RegressionDesign((DRIFT,), (drift,))
    return RegressionDesign((DRIFT, B0), (drift, np.diff(exp_regressor(rate, n_levels))))


def order_box(p_max: int, q_max: int) -> list[ArimaOrder]:
    """All orders in the search box, in tie-break order (p + q, then p)."""
    orders = [ArimaOrder(p, 1, q) for p, q in product(range(p_max + 1), range(q_max + 1))]
    return sorted(orders, key=lambda o: (o.p + o.q, o.p))


@dataclass(frozen=True)
class Candidate:
    fit: FitResult
    scores: CriterionScores

    @property
    def order(self) -> ArimaOrder:
        return self.fit.order


@dataclass(frozen=True)
class GridPointResult:
    rate: float
    best_order: ArimaOrder
    fit: FitResult
    scores: CriterionScores


@dataclass
class CriterionSelection:
    criterion: Criterion
    chosen_rate: float
    chosen_order: ArimaOrder
    fit: FitResult
    scores: CriterionScores
    curve: list[GridPointResult]
    b0_t_ratio: float | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def value(self) -> float:
        return self.scores[self.criterion]


@dataclass
class CountrySelection:
    id: str
    window: SampleWindow | None
    per_criterion: dict[Criterion, CriterionSelection] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    error: str | None = None
    error_kind: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def fit_rate(
    series: CountrySeries,
    rate: float,
    p_max: int = DEFAULT_P_MAX,
    q_max: int = DEFAULT_Q_MAX,
    seed: int = 0,
) -> list[Candidate]:
    """Fit every order in the search box at one growth rate."""
    dz = difference(series.values)
    design = trend_design(len(series), rate)
    out = []
    for order in order_box(p_max, q_max):
        try:
            f = fit(dz, design, order, seed=seed)
        except ComputationError as exc:
            log.debug("%s rate=%g order=%s failed: %s", series.id, rate, order, exc)
            continue
        if not math.isfinite(f.loglik):
            continue
        out.append(Candidate(f, _lenient_score(f)))
    return out


def pick_order(rate: float, candidates: Sequence[Candidate], criterion: Criterion) -> GridPointResult:
    """Criterion-minimal candidate; non-converged fits only count if nothing converged."""
    pool = [c for c in candidates if c.fit.converged] or list(candidates)
    pool = [c for c in pool if math.isfinite(c.scores[criterion])]
    if not pool:
        raise AllFitsFailed(f"no usable fit at rate {rate:g}")
    best = None
    # candidates arrive in tie-break order, so only a strict improvement replaces
    for c in sorted(pool, key=lambda c: (c.order.p + c.order.q, c.order.p)):
        if best is None or c.scores[criterion] < best.scores[criterion] - TIE_TOL:
            best = c
    return GridPointResult(rate, best.order, best.fit, best.scores)


def _pick_rate(curve: Sequence[GridPointResult], criterion: Criterion) -> GridPointResult:
    best = None
    for point in sorted(curve, key=lambda g: g.rate):
        if best is None or point.scores[criterion] < best.scores[criterion] - TIE_TOL:
            best = point
    return best


def select_order(
    series: CountrySeries,
    rate: float,
    criterion: Criterion,
    p_max: int = DEFAULT_P_MAX,
    q_max: int = DEFAULT_Q_MAX,
    seed: int = 0,
) -> GridPointResult:
    """Step one: best ARIMA order at a single growth rate."""
    return pick_order(rate, fit_rate(series, rate, p_max, q_max, seed), Criterion(criterion))


def _diagnose(sel: CriterionSelection) -> None:
    f = sel.fit
    tag = sel.criterion.value
    if not f.converged:
        sel.warnings.append(f"{tag}:not_converged")
    if f.ar_root_min_modulus < NEAR_UNIT_ROOT:
        sel.warnings.append(f"{tag}:near_unit_root")
    if sel.chosen_rate > 0 and B0 in f.beta:
        if f.beta[B0] < 0:
            sel.warnings.append(f"{tag}:negative_b0")
        try:
            sel.b0_t_ratio = t_ratio(f, B0)
        except ComputationError:
            sel.warnings.append(f"{tag}:b0_se_unavailable")
        else:
            if abs(sel.b0_t_ratio) < T_CRIT:
                sel.warnings.append(f"{tag}:b0_not_significant")


def _reduce(
    rate_candidates: Sequence[tuple[float, list[Candidate]]], criterion: Criterion
) -> CriterionSelection:
    curve = []
    for rate, cands in rate_candidates:
        try:
            curve.append(pick_order(rate, cands, criterion))
        except AllFitsFailed:
            log.debug("rate %g: every fit failed under %s", rate, criterion.value)
    if not curve:
        raise AllFitsFailed(f"every grid point failed under {criterion.value}")
    best = _pick_rate(curve, criterion)
    sel = CriterionSelection(criterion, best.rate, best.best_order, best.fit, best.scores, curve)
    _diagnose(sel)
    return sel


def _fit_grid(series, grid, p_max, q_max, seed):
    return [(rate, fit_rate(series, rate, p_max, q_max, seed)) for rate in grid.rates]


def select_growth(
    series: CountrySeries,
    grid: GrowthGrid,
    criterion: Criterion,
    p_max: int = DEFAULT_P_MAX,
    q_max: int = DEFAULT_Q_MAX,
    seed: int = 0,
) -> CriterionSelection:
    """Step two: the growth rate whose best model minimizes ``criterion``."""
    return _reduce(_fit_grid(series, grid, p_max, q_max, seed), Criterion(criterion))


def select_all(
    series: CountrySeries,
    grid: GrowthGrid,
    p_max: int = DEFAULT_P_MAX,
    q_max: int = DEFAULT_Q_MAX,
    seed: int = 0,
    criteria: Iterable[Criterion] = tuple(Criterion),
    sample: SampleWindow | None = None,
) -> CountrySelection:
    """Run both steps for every criterion from a single set of fits."""
    fits = _fit_grid(series, grid, p_max, q_max, seed)
    result = CountrySelection(series.id, sample)
    for criterion in criteria:
        try:
            sel = _reduce(fits, criterion)
        except AllFitsFailed as exc:
            result.warnings.append(f"{criterion.value}:all_fits_failed")
            result.error = str(exc)
            result.error_kind = "computation"
            continue
        result.per_criterion[criterion] = sel
        result.warnings.extend(sel.warnings)
    return result


def _run_cell(args) -> CountrySelection:
    series, sample, grid, p_max, q_max, seed = args
    try:
        windowed = window(series, sample) if sample is not None else series
    except InputError as exc:
        log.warning("%s window %s skipped: %s", series.id, sample, exc)
        return CountrySelection(
            series.id, sample, warnings=["window_skipped"], error=str(exc), error_kind="input"
        )
    try:
        return select_all(windowed, grid, p_max, q_max, seed, sample=sample)
    except GrowthTrendError as exc:
        log.warning("%s window %s failed: %s", series.id, sample, exc)
        kind = "input" if isinstance(exc, InputError) else "computation"
        return CountrySelection(
            series.id, sample, warnings=["failed"], error=str(exc), error_kind=kind
        )


def run_battery(
    all_series: Sequence[CountrySeries],
    grid: GrowthGrid,
    windows: Sequence[SampleWindow | None],
    p_max: int = DEFAULT_P_MAX,
    q_max: int = DEFAULT_Q_MAX,
    seed: int = 0,
    n_jobs: int = 1,
) -> list[CountrySelection]:
    """Selections for every (series, window) cell, in input order.

    Cells that cannot be evaluated come back with ``error`` set instead of
    aborting the run.  With ``n_jobs > 1`` cells run in worker processes;
    the output order is unaffected.
    """
    cells = [(s, w, grid, p_max, q_max, seed) for s in all_series for w in windows]
    if n_jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(c) for c in cells]
