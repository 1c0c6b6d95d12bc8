"""Percent log returns, descriptive summaries, PDF histograms and Pearson
correlation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np

from .errors import DataError
from .series import DailySeries

SUMMARY_ROWS = ("mean", "std", "min", "q1", "median", "q3", "max")
DEFAULT_BINS = 50


@dataclass(frozen=True)
class ReturnSeries:
    name: str
    dates: tuple[date, ...]
    values: tuple[float, ...]  # percent

    def __len__(self):
        return len(self.values)

    def as_daily(self) -> DailySeries:
        return DailySeries(self.name, self.dates[0], self.values)


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, k) for k in SUMMARY_ROWS)


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    densities: tuple[float, ...]
    counts: tuple[int, ...]


def log_returns(prices: DailySeries) -> ReturnSeries:
    """``100 * ln(P[t+1] / P[t])``, dated at the later day."""
    p = prices.array()
    if len(p) < 2:
        raise DataError(f"series {prices.name!r} too short for returns (length {len(p)})")
    if np.any(p <= 0):
        bad = int(np.argmax(p <= 0))
        raise DataError(f"non-positive price {p[bad]!r} on {prices.dates[bad]} in {prices.name!r}")
    values = 100.0 * np.log(p[1:] / p[:-1])
    return ReturnSeries(prices.name, tuple(prices.dates[1:]), tuple(values.tolist()))


def quantile_sorted(xs: Sequence[float], p: float) -> float:
    """Linear interpolation between order statistics at position ``(n-1)*p``."""
    h = (len(xs) - 1) * p
    lo = math.floor(h)
    if lo + 1 >= len(xs):
        return float(xs[-1])
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def describe(values: Sequence[float]) -> SummaryStats:
    xs = sorted(float(v) for v in values)
    n = len(xs)
    if n == 0:
        raise DataError("cannot describe an empty sequence")
    mean = math.fsum(xs) / n
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1)) if n > 1 else 0.0
    return SummaryStats(
        mean=mean,
        std=std,
        min=xs[0],
        q1=quantile_sorted(xs, 0.25),
        median=quantile_sorted(xs, 0.5),
        q3=quantile_sorted(xs, 0.75),
        max=xs[-1],
    )


def histogram(values: Sequence[float], bin_count: int = DEFAULT_BINS) -> Histogram:
    """Equal-width PDF histogram over ``[min, max]``; the last bin is closed.

    A constant input spans ``[v - 0.5, v + 0.5]``.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise DataError("cannot histogram an empty sequence")
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bin_count + 1)
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, bin_count - 1)
    counts = np.bincount(idx, minlength=bin_count)
    densities = counts / (x.size * np.diff(edges))
    return Histogram(tuple(edges.tolist()), tuple(densities.tolist()), tuple(int(c) for c in counts))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation, clamped to [-1, 1]."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise DataError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise DataError(f"need at least 2 points, got {a.size}")
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        raise DataError("zero variance")
    da = a - a.mean()
    db = b - b.mean()
    r = float(np.dot(da, db) / math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db))))
    return max(-1.0, min(1.0, r))
