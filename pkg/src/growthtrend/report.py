"""Table builders and formatting for the command-line tool.

Every table is a header plus rows of already-formatted strings, so CSV and
markdown output are two renderings of the same cells.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .dataio import CountrySeries, SampleWindow, window
from .errors import ComputationError, InputError
from .growth import GrowthGrid, compare_fits
from .selection import Criterion, CountrySelection, CriterionSelection

NA = "NA"
R2_COLUMNS = ("id", "r2_exp", "r2_lin", "diff")
SELECT_COLUMNS = ("id", "aic", "aicc", "bic", "order_aic", "order_aicc", "order_bic", "warnings")
CURVE_COLUMNS = ("rate", "aic", "aicc", "bic", "p", "q")


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[list[str]] = field(default_factory=list)
    # 0 = clean, 2 = some series had input problems, 3 = some computations failed
    status: int = 0

    def flag(self, status: int) -> None:
        self.status = max(self.status, status)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [
            "| " + " | ".join(self.columns) + " |",
            "|" + "|".join("---" for _ in self.columns) + "|",
        ]
        lines += ["| " + " | ".join(row) + " |" for row in self.rows]
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_markdown() if fmt == "markdown" else self.to_csv()


def fmt_num(x: float | None, digits: int) -> str:
    """Fixed ``digits`` decimals, halves rounded away from zero."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return NA
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    q = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)
    return f"{q:.{digits}f}"


def fmt_order(order) -> str:
    return f"({order.p},{order.d},{order.q})"


def _windowed(series: CountrySeries, sample: SampleWindow | None) -> CountrySeries:
    return window(series, sample) if sample is not None else series


def r2_table(
    all_series: Sequence[CountrySeries],
    grid: GrowthGrid,
    sample: SampleWindow | None,
    digits: int = 4,
) -> Table:
    table = Table(R2_COLUMNS)
    for s in all_series:
        try:
            cmp = compare_fits(_windowed(s, sample), grid)
        except InputError:
            table.rows.append([s.id, NA, NA, NA])
            table.flag(2)
            continue
        except ComputationError:
            table.rows.append([s.id, NA, NA, NA])
            table.flag(3)
            continue
        table.rows.append(
            [s.id, fmt_num(cmp.r2_exp, digits), fmt_num(cmp.r2_lin, digits), fmt_num(cmp.diff, digits)]
        )
    return table


def select_table(selections: Sequence[CountrySelection], digits: int = 4) -> Table:
    table = Table(SELECT_COLUMNS)
    crits = (Criterion.AIC, Criterion.AICC, Criterion.BIC)
    for sel in selections:
        rates, orders = [], []
        for c in crits:
            cs = sel.per_criterion.get(c)
            rates.append(fmt_num(cs.chosen_rate, digits) if cs else NA)
            orders.append(fmt_order(cs.chosen_order) if cs else NA)
        if not sel.ok:
            table.flag(2 if sel.error_kind == "input" else 3)
        table.rows.append([sel.id, *rates, *orders, ";".join(sel.warnings)])
    return table


def curve_table(
    selection: CountrySelection, criterion: Criterion = Criterion.AIC, digits: int = 4
) -> Table:
    """Per-rate criterion values; ``p`` and ``q`` are those chosen under ``criterion``.

    Each criterion column holds that criterion's own step-one minimum at the
    rate, so the three columns may come from different orders.
    """
    table = Table(CURVE_COLUMNS)
    if not selection.ok and not selection.per_criterion:
        table.flag(2 if selection.error_kind == "input" else 3)
        return table
    by_rate: dict[float, dict[Criterion, object]] = {}
    for c, cs in selection.per_criterion.items():
        for point in cs.curve:
            by_rate.setdefault(point.rate, {})[c] = point
    for rate in sorted(by_rate):
        points = by_rate[rate]
        values = []
        for c in (Criterion.AIC, Criterion.AICC, Criterion.BIC):
            point = points.get(c)
            values.append(fmt_num(point.scores[c], digits) if point else NA)
        active = points.get(criterion)
        p = str(active.best_order.p) if active else NA
        q = str(active.best_order.q) if active else NA
        table.rows.append([fmt_num(rate, digits), *values, p, q])
    if not selection.ok:
        table.flag(3)
    return table


def describe(sel: CriterionSelection) -> str:
    """One-line human summary used in verbose CLI diagnostics."""
    f = sel.fit
    parts = [
        f"{sel.criterion.value}: rate={sel.chosen_rate:.4f}",
        f"order={fmt_order(sel.chosen_order)}",
        f"loglik={f.loglik:.3f}",
    ]
    parts += [f"{k}={v:.4g}" for k, v in f.beta.items()]
    if f.ar:
        parts.append("ar=" + ",".join(f"{a:.4f}" for a in f.ar))
    if f.ma:
        parts.append("ma=" + ",".join(f"{m:.4f}" for m in f.ma))
    if sel.b0_t_ratio is not None:
        parts.append(f"t(b0)={sel.b0_t_ratio:.2f}")
    return " ".join(parts)
