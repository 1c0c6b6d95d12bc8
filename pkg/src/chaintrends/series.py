from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class DailySeries:
    """A named run of real values, one per consecutive UTC calendar day.

    Day ``i`` is ``start_date + i`` days; there are no gaps or duplicates by
    construction, so only the start date is stored.
    """

    name: str
    start_date: date
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise DataError(f"series {self.name!r} is empty")
        if not all(math.isfinite(v) for v in values):
            raise DataError(f"series {self.name!r} contains non-finite values")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)

    @property
    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self.values))]

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def between(self, first: date, last: date) -> DailySeries:
        """Restrict to the inclusive day range ``[first, last]``."""
        lo = (first - self.start_date).days
        hi = (last - self.start_date).days
        if lo < 0 or hi >= len(self.values) or hi < lo:
            raise DataError(
                f"range {first}..{last} is outside series {self.name!r} "
                f"({self.start_date}..{self.end_date})"
            )
        if lo == 0 and hi == len(self.values) - 1:
            return self
        return DailySeries(self.name, first, self.values[lo:hi + 1])

    def with_values(self, values: Iterable[float], name: str | None = None) -> DailySeries:
        return DailySeries(self.name if name is None else name, self.start_date, tuple(values))
