"""Stitching of overlapping max-100-normalized search-interest windows."""
from __future__ import annotations

from datetime import timedelta
from typing import Sequence

import numpy as np

from .errors import DataError
from .ingest import TrendsWindow
from .series import DailySeries

DEFAULT_MIN_OVERLAP = 30


def stitch(windows: Sequence[TrendsWindow], min_overlap: int = DEFAULT_MIN_OVERLAP,
           name: str = "trends") -> DailySeries:
    """Chain windows into one daily series on a 0-100 scale.

    The first window keeps unit scale. Each following window is scaled by
    the ratio of the stitched mean to its own mean over the shared days; on
    those days the stitched and scaled values are averaged, and days past
    the current end are appended. The result is renormalized to max 100.
    """
    if min_overlap < 1:
        raise ValueError(f"min_overlap must be >= 1, got {min_overlap}")
    if not windows:
        raise DataError("no trends windows to stitch")
    first = windows[0]
    start = first.start_date
    stitched = np.asarray(first.values, dtype=float)
    prev = first
    for w in windows[1:]:
        if w.start_date < prev.start_date:
            raise DataError(f"windows not sorted by start date: {w.window_id!r} starts before {prev.window_id!r}")
        offset = (w.start_date - start).days
        incoming = np.asarray(w.values, dtype=float)
        overlap = min(len(stitched) - offset, len(incoming))
        if overlap < min_overlap:
            gap = offset - len(stitched)
            detail = f" (date gap of {gap} days)" if gap > 0 else ""
            raise DataError(
                f"insufficient overlap between windows {prev.window_id!r} and {w.window_id!r}: "
                f"{max(overlap, 0)} days, need {min_overlap}{detail}"
            )
        incoming_mean = incoming[:overlap].mean()
        if incoming_mean == 0:
            raise DataError(f"window {w.window_id!r} is all zero over its overlap; scale undefined")
        factor = stitched[offset:offset + overlap].mean() / incoming_mean
        scaled = incoming * factor
        stitched[offset:offset + overlap] = (stitched[offset:offset + overlap] + scaled[:overlap]) / 2
        stitched = np.concatenate([stitched, scaled[overlap:]])
        prev = w
    return rescale_to_max(DailySeries(name, start, tuple(stitched.tolist())), 100.0)


def rescale_to_max(series: DailySeries, target_max: float) -> DailySeries:
    if not target_max > 0:
        raise ValueError(f"target_max must be positive, got {target_max}")
    top = max(series.values)
    if top <= 0:
        raise DataError(f"series {series.name!r} has no positive values to rescale")
    if top == target_max:
        return series
    # divide first so the maximal entries land on target_max exactly
    return series.with_values(v / top * target_max for v in series.values)


def align(a: DailySeries, b: DailySeries) -> tuple[DailySeries, DailySeries]:
    """Restrict both series to their common date range (at least 2 days)."""
    first = max(a.start_date, b.start_date)
    last = min(a.end_date, b.end_date)
    if last < first:
        raise DataError(f"no overlap between {a.name!r} ({a.start_date}..{a.end_date}) "
                        f"and {b.name!r} ({b.start_date}..{b.end_date})")
    if last - first < timedelta(days=1):
        raise DataError(f"overlap of {a.name!r} and {b.name!r} is a single day ({first})")
    return a.between(first, last), b.between(first, last)
