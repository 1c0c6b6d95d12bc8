"""Seeded generators for synthetic inputs: transaction shards, smooth
positive series cut into trends windows, and random-walk price paths."""
from __future__ import annotations

import calendar
import math
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import TrendsWindow, TxRecord, format_transactions

START_2017 = calendar.timegm((2017, 1, 1, 0, 0, 0))


def transactions(n: int, seed: int = 0, start: int = START_2017, days: int = 730,
                 contract_rate: float = 0.05, difficulty_rate: float = 0.5) -> list[TxRecord]:
    """``n`` records with timestamps spread uniformly over ``days`` days."""
    rng = np.random.default_rng(seed)
    ts = np.sort(rng.integers(start, start + days * 86400, size=n))
    gas = rng.integers(21000, 2_000_000, size=n)
    # up to ~1000 Gwei, so sums overflow 64 bits well before 1e9 rows
    price = rng.integers(0, 10**12, size=n)
    contract = rng.random(n) < contract_rate
    has_difficulty = rng.random(n) < difficulty_rate
    difficulty = rng.integers(10**12, 10**15, size=n)
    return [
        TxRecord(int(ts[i]), int(gas[i]), int(price[i]), bool(contract[i]),
                 int(difficulty[i]) if has_difficulty[i] else None)
        for i in range(n)
    ]


def gas_difficulty_records(n: int, target_r: float, seed: int = 0,
                           start: int = START_2017) -> list[TxRecord]:
    """Contract creations whose (gas, difficulty) Pearson correlation is ``target_r``
    in expectation.

    Gas is uniform on [53000, 3000000]; difficulty is
    ``base + slope * gas + e`` with Gaussian ``e`` of standard deviation
    ``slope * sd(gas) * sqrt(1 / target_r**2 - 1)``, which gives the target
    population correlation. Values are rounded to integers.
    """
    if not 0 < target_r < 1:
        raise ValueError("target_r must be in (0, 1)")
    rng = np.random.default_rng(seed)
    lo, hi = 53_000, 3_000_000
    gas = rng.integers(lo, hi + 1, size=n)
    slope = 1e6
    sd_gas = (hi - lo) / math.sqrt(12)
    noise_sd = slope * sd_gas * math.sqrt(1 / target_r**2 - 1)
    base = 10**13
    difficulty = np.rint(base + slope * gas + rng.normal(0, noise_sd, size=n)).astype(np.int64)
    difficulty = np.maximum(difficulty, 0)
    ts = np.sort(rng.integers(start, start + 365 * 86400, size=n))
    return [TxRecord(int(ts[i]), int(gas[i]), 10**10, True, int(difficulty[i])) for i in range(n)]


def write_shards(records: Sequence[TxRecord], directory, shard_count: int, prefix: str = "shard") -> list[Path]:
    """Split records round-robin into ``shard_count`` CSV files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in range(shard_count):
        path = directory / f"{prefix}-{k:03d}.csv"
        path.write_text(format_transactions(records[k::shard_count]), encoding="utf-8")
        paths.append(path)
    return paths


def smooth_series(n: int, rng: np.random.Generator, components: int = 3) -> np.ndarray:
    """Positive sum of a few slow sinusoids on a constant offset."""
    t = np.arange(n)
    out = np.zeros(n)
    for _ in range(components):
        period = rng.uniform(60, 720)
        out += rng.uniform(5, 30) * np.sin(2 * np.pi * t / period + rng.uniform(0, 2 * np.pi))
    return out - out.min() + rng.uniform(5, 50)


def cut_windows(values: Sequence[float], start: date, length: int = 180, min_overlap: int = 30,
                rng: np.random.Generator | None = None, prefix: str = "w") -> list[TrendsWindow]:
    """Cover ``values`` with windows that each overlap the previous by at
    least ``min_overlap`` days, each rescaled to max 100.

    Offsets advance by a random step in ``[length // 2, length - min_overlap]``
    (fixed at the upper bound without ``rng``); the last window is shifted
    to end on the final day.
    """
    x = np.asarray(values, dtype=float)
    n = len(x)
    starts = [0]
    while starts[-1] + length < n:
        hi = length - min_overlap
        step = hi if rng is None else int(rng.integers(length // 2, hi + 1))
        starts.append(starts[-1] + step)
    if len(starts) > 1:
        starts[-1] = max(n - length, 0)
    windows = []
    for k, s in enumerate(starts):
        chunk = x[s:s + length]
        windows.append(TrendsWindow(f"{prefix}{k}", start + timedelta(days=s), tuple((chunk / chunk.max() * 100).tolist())))
    return windows


def random_walk(n: int, rng: np.random.Generator, start: float = 100.0, step_sd: float = 1.0) -> np.ndarray:
    return start + np.cumsum(rng.normal(0, step_sd, size=n))
