"""Lagged cross-correlation of daily series and the pairwise matrix of
maximum correlations.

A positive lag ``k`` pairs ``x`` on day ``t`` with ``y`` on day ``t + k``:
the lag at the maximum is how many days ``y`` trails ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .series import DailySeries
from .stats import pearson
from .trends import align

DEFAULT_MAX_LAG = 60


@dataclass(frozen=True)
class LagCorrelation:
    pair: tuple[str, str]
    lags: tuple[int, ...]
    # NaN where a lag slice has zero variance
    coefficients: tuple[float, ...]


@dataclass(frozen=True)
class XCorrMatrix:
    names: tuple[str, ...]
    max_corr: tuple[tuple[float, ...], ...]
    lag_at_max: tuple[tuple[int, ...], ...]


def _slice_pearson(a: np.ndarray, b: np.ndarray) -> float:
    try:
        return pearson(a, b)
    except DataError:
        # zero variance: the lag is undefined rather than uncorrelated
        return math.nan


def cross_correlation(x: DailySeries, y: DailySeries, max_lag: int = DEFAULT_MAX_LAG) -> LagCorrelation:
    if max_lag < 0:
        raise ValueError(f"max_lag must be >= 0, got {max_lag}")
    ax, ay = align(x, y)
    n = len(ax)
    if n <= max_lag + 2:
        raise DataError(f"overlap of {x.name!r} and {y.name!r} is {n} days, need more than {max_lag + 2}")
    xs, ys = ax.array(), ay.array()
    coefficients = tuple(_slice_pearson(xs[:n - k], ys[k:]) for k in range(max_lag + 1))
    return LagCorrelation((x.name, y.name), tuple(range(max_lag + 1)), coefficients)


def lag_max(lc: LagCorrelation, min_lag: int = 0) -> tuple[int, float]:
    """Lag of the largest signed coefficient at or above ``min_lag``.

    Undefined lags are skipped; ties go to the smallest lag.
    """
    best: tuple[int, float] | None = None
    for lag, c in zip(lc.lags, lc.coefficients):
        if lag < min_lag or math.isnan(c):
            continue
        if best is None or c > best[1]:
            best = (lag, c)
    if best is None:
        raise DataError(f"no defined coefficient at lag >= {min_lag} for {lc.pair}")
    return best


def _entry(x: DailySeries, y: DailySeries, max_lag: int) -> tuple[float, int]:
    forward = lag_max(cross_correlation(x, y, max_lag))
    backward = lag_max(cross_correlation(y, x, max_lag))
    # prefer the stronger direction; on equal strength the shorter lag
    lag, c = max(forward, backward, key=lambda lc: (lc[1], -lc[0]))
    return c, lag


def xcorr_matrix(series: Sequence[DailySeries], max_lag: int = DEFAULT_MAX_LAG) -> XCorrMatrix:
    n = len(series)
    if n == 0:
        raise DataError("no series for the cross-correlation matrix")
    corr = [[0.0] * n for _ in range(n)]
    lags = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            try:
                if i == j:
                    lag, c = lag_max(cross_correlation(series[i], series[i], max_lag), min_lag=1)
                else:
                    c, lag = _entry(series[i], series[j], max_lag)
            except DataError as exc:
                raise DataError(f"pair ({series[i].name}, {series[j].name}): {exc}") from exc
            corr[i][j] = corr[j][i] = c
            lags[i][j] = lags[j][i] = lag
    return XCorrMatrix(
        tuple(s.name for s in series),
        tuple(tuple(row) for row in corr),
        tuple(tuple(row) for row in lags),
    )


def format_curve(lc: LagCorrelation) -> str:
    lines = ["lag,coefficient"]
    for lag, c in zip(lc.lags, lc.coefficients):
        lines.append(f"{lag}," + ("" if math.isnan(c) else f"{c:.6f}"))
    return "\n".join(lines) + "\n"


def format_matrix(m: XCorrMatrix, which: str = "corr") -> str:
    """CSV with a header row and first column of names.

    ``which`` selects the 2-decimal coefficients (``"corr"``) or the integer
    lags (``"lags"``).
    """
    rows = m.max_corr if which == "corr" else m.lag_at_max
    lines = ["," + ",".join(m.names)]
    for name, row in zip(m.names, rows):
        cells = [f"{v:.2f}" for v in row] if which == "corr" else [str(v) for v in row]
        lines.append(name + "," + ",".join(cells))
    return "\n".join(lines) + "\n"
