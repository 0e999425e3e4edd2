"""Reading, validating and windowing annual level series.

The on-disk format is a long CSV with header ``id,year,value``.  Rows may
come in any order; they are grouped by ``id`` (first-appearance order is
kept) and sorted by year.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DuplicateYear,
    GapInYears,
    MalformedRow,
    NonPositiveValue,
    SeriesTooShort,
    WindowOutOfRange,
)

MIN_LENGTH = 10
HEADER = ("id", "year", "value")


@dataclass(frozen=True)
class CountrySeries:
    id: str
    years: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "years", tuple(int(y) for y in self.years))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        _validate(self.id, self.years, self.values)

    def __len__(self) -> int:
        return len(self.years)

    @property
    def span(self) -> "SampleWindow":
        return SampleWindow(self.years[0], self.years[-1])

    def scaled(self, factor: float) -> "CountrySeries":
        return CountrySeries(self.id, self.years, [v * factor for v in self.values])


@dataclass(frozen=True)
class SampleWindow:
    start_year: int
    end_year: int

    def __post_init__(self):
        if not self.start_year < self.end_year:
            raise WindowOutOfRange(
                f"window start {self.start_year} must precede end {self.end_year}"
            )

    def __str__(self) -> str:
        return f"{self.start_year}-{self.end_year}"


def _validate(sid: str, years: Sequence[int], values: Sequence[float]) -> None:
    if len(years) != len(values):
        raise MalformedRow(f"{sid}: {len(years)} years but {len(values)} values")
    for prev, cur in zip(years, years[1:]):
        if cur == prev:
            raise DuplicateYear(f"{sid}: year {cur} appears twice")
        if cur != prev + 1:
            raise GapInYears(f"{sid}: years jump from {prev} to {cur}")
    for y, v in zip(years, values):
        if not math.isfinite(v) or v <= 0:
            raise NonPositiveValue(f"{sid}: value {v!r} at year {y} is not finite and > 0")
    if len(years) < MIN_LENGTH:
        raise SeriesTooShort(
            f"{sid}: {len(years)} observations, need at least {MIN_LENGTH}"
        )


def parse_csv(raw: str | bytes) -> list[CountrySeries]:
    """Parse ``id,year,value`` text into validated series."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    reader = csv.reader(io.StringIO(raw))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow("empty input, expected header 'id,year,value'") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise MalformedRow(f"bad header {header!r}, expected 'id,year,value'")

    rows: dict[str, dict[int, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise MalformedRow(f"line {lineno}: expected 3 columns, got {len(row)}")
        sid, year_s, value_s = (cell.strip() for cell in row)
        if not sid:
            raise MalformedRow(f"line {lineno}: empty id")
        try:
            year = int(year_s)
            value = float(value_s)
        except ValueError:
            raise MalformedRow(f"line {lineno}: cannot parse {row!r}") from None
        by_year = rows.setdefault(sid, {})
        if year in by_year:
            raise DuplicateYear(f"line {lineno}: {sid} year {year} appears twice")
        by_year[year] = value

    out = []
    for sid, by_year in rows.items():
        years = sorted(by_year)
        out.append(CountrySeries(sid, years, [by_year[y] for y in years]))
    return out


def read_csv(path) -> list[CountrySeries]:
    with open(path, "rb") as fh:
        return parse_csv(fh.read())


def serialize(series: Iterable[CountrySeries]) -> str:
    """Inverse of :func:`parse_csv`; floats are written with ``repr`` so they round-trip."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for s in series:
        for y, v in zip(s.years, s.values):
            writer.writerow([s.id, y, repr(v)])
    return buf.getvalue()


def window(series: CountrySeries, w: SampleWindow) -> CountrySeries:
    """Restrict ``series`` to the inclusive year range of ``w``."""
    first, last = series.years[0], series.years[-1]
    if w.start_year < first or w.end_year > last:
        raise WindowOutOfRange(
            f"{series.id}: window {w} not covered by data {first}-{last}"
        )
    lo = w.start_year - first
    hi = w.end_year - first + 1
    return CountrySeries(series.id, series.years[lo:hi], series.values[lo:hi])
