"""Monthly transaction statistics computed shard by shard.

Each shard is mapped to a :class:`PartialAggregate` independently; partials
form a commutative monoid under :func:`merge` (the empty aggregate is the
identity), so shards can be reduced in any grouping and any order. All sums
are exact Python integers, which keeps wei totals free of overflow and makes
the finalized means identical regardless of how the work was split.
"""
from __future__ import annotations

import calendar
import functools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Sequence

from .errors import DataError, ShardError
from .ingest import ParseReport, TxRecord, parse_transactions
from .series import DailySeries
from . import stats

Month = tuple[int, int]

MONTHLY_HEADER = ["month", "tx_count", "contract_count", "mean_gas", "mean_gas_price_gwei"]
WEI_PER_GWEI = 10**9


@dataclass(eq=False)
class MonthStats:
    tx_count: int = 0
    contract_count: int = 0
    gas_sum: int = 0
    gas_price_sum_wei: int = 0
    # (gas_used, difficulty) for rows that carry a difficulty; a multiset
    difficulty_pairs: list[tuple[int, int]] = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, MonthStats):
            return NotImplemented
        return (
            self.tx_count == other.tx_count
            and self.contract_count == other.contract_count
            and self.gas_sum == other.gas_sum
            and self.gas_price_sum_wei == other.gas_price_sum_wei
            and Counter(self.difficulty_pairs) == Counter(other.difficulty_pairs)
        )

    def combined(self, other: MonthStats) -> MonthStats:
        return MonthStats(
            self.tx_count + other.tx_count,
            self.contract_count + other.contract_count,
            self.gas_sum + other.gas_sum,
            self.gas_price_sum_wei + other.gas_price_sum_wei,
            self.difficulty_pairs + other.difficulty_pairs,
        )


@dataclass(eq=False)
class PartialAggregate:
    months: dict[Month, MonthStats] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, PartialAggregate):
            return NotImplemented
        return self.months == other.months

    def __bool__(self):
        return bool(self.months)

    def difficulty_pairs(self) -> list[tuple[int, int]]:
        return [pair for month in sorted(self.months) for pair in self.months[month].difficulty_pairs]


@dataclass(frozen=True)
class MonthlyAggregate:
    month: Month
    tx_count: int
    contract_count: int
    mean_gas: float
    mean_gas_price_gwei: float


def month_of(timestamp: int) -> Month:
    t = time.gmtime(timestamp)
    return t.tm_year, t.tm_mon


def map_shard(records: Iterable[TxRecord]) -> PartialAggregate:
    months: dict[Month, MonthStats] = {}
    for r in records:
        key = month_of(r.timestamp)
        m = months.get(key)
        if m is None:
            m = months[key] = MonthStats()
        m.tx_count += 1
        m.contract_count += r.is_contract_creation
        m.gas_sum += r.gas_used
        m.gas_price_sum_wei += r.gas_price_wei
        if r.difficulty is not None:
            m.difficulty_pairs.append((r.gas_used, r.difficulty))
    return PartialAggregate(months)


def merge(a: PartialAggregate, b: PartialAggregate) -> PartialAggregate:
    """Month-wise sum of two partials. Neither input is modified."""
    empty = MonthStats()
    return PartialAggregate({
        key: a.months.get(key, empty).combined(b.months.get(key, empty))
        for key in sorted(a.months.keys() | b.months.keys())
    })


def fold(partials: Iterable[PartialAggregate]) -> PartialAggregate:
    return functools.reduce(merge, partials, PartialAggregate())


def finalize(p: PartialAggregate) -> list[MonthlyAggregate]:
    out = []
    for key in sorted(p.months):
        m = p.months[key]
        if m.tx_count == 0:
            continue
        out.append(MonthlyAggregate(
            month=key,
            tx_count=m.tx_count,
            contract_count=m.contract_count,
            # int / int is correctly rounded even beyond 2**53
            mean_gas=m.gas_sum / m.tx_count,
            mean_gas_price_gwei=m.gas_price_sum_wei / (m.tx_count * WEI_PER_GWEI),
        ))
    return out


def _map_path(path: str, policy: str) -> tuple[PartialAggregate, ParseReport]:
    try:
        with open(path, "rb") as fh:
            records, report = parse_transactions(fh, policy)
    except (OSError, DataError) as exc:
        raise ShardError(path, exc) from exc
    return map_shard(records), report


def run_parallel_partial(
    shard_paths: Sequence[str], worker_count: int = 1, policy: str = "skip"
) -> tuple[PartialAggregate, ParseReport]:
    """Parse and map every shard on ``worker_count`` processes, then reduce.

    Partials are reduced in shard order, so even the order of the collected
    difficulty pairs does not depend on the schedule.
    """
    if worker_count < 1:
        raise ValueError(f"worker_count must be >= 1, got {worker_count}")
    paths = [str(p) for p in shard_paths]
    if worker_count == 1 or len(paths) <= 1:
        results = [_map_path(p, policy) for p in paths]
    else:
        with ProcessPoolExecutor(max_workers=min(worker_count, len(paths))) as pool:
            results = list(pool.map(_map_path, paths, [policy] * len(paths)))
    report = ParseReport()
    for path, (_, shard_report) in zip(paths, results):
        report.absorb(shard_report, source=path)
    return fold(partial for partial, _ in results), report


def run_parallel(
    shard_paths: Sequence[str], worker_count: int = 1, policy: str = "skip"
) -> tuple[list[MonthlyAggregate], ParseReport]:
    partial, report = run_parallel_partial(shard_paths, worker_count, policy)
    return finalize(partial), report


def gas_difficulty_pearson(p: PartialAggregate) -> float:
    """Pearson correlation between gas used and difficulty over all raw pairs."""
    pairs = p.difficulty_pairs()
    if len(pairs) < 2:
        raise DataError(f"need at least 2 (gas, difficulty) pairs, got {len(pairs)}")
    gas, difficulty = zip(*pairs)
    return stats.pearson(gas, difficulty)


def format_monthly(rows: Iterable[MonthlyAggregate]) -> str:
    lines = [",".join(MONTHLY_HEADER)]
    for r in rows:
        year, month = r.month
        lines.append(
            f"{year:04d}-{month:02d},{r.tx_count},{r.contract_count},"
            f"{r.mean_gas:.6f},{r.mean_gas_price_gwei:.6f}"
        )
    return "\n".join(lines) + "\n"


def parse_monthly(text: str) -> list[MonthlyAggregate]:
    """Read back the output of :func:`format_monthly`."""
    lines = text.splitlines()
    if not lines or lines[0].strip().split(",") != MONTHLY_HEADER:
        raise DataError(f"monthly header mismatch, expected {','.join(MONTHLY_HEADER)}")
    rows = []
    for n, line in enumerate(lines[1:], start=2):
        try:
            month, tx, contracts, gas, price = line.split(",")
            year, mon = month.split("-")
            rows.append(MonthlyAggregate((int(year), int(mon)), int(tx), int(contracts), float(gas), float(price)))
        except ValueError:
            raise DataError(f"line {n}: malformed monthly row {line!r}") from None
    return rows


def monthly_to_daily(rows: Sequence[MonthlyAggregate], column: str = "tx_count",
                     name: str | None = None) -> DailySeries:
    """Spread a monthly column over the days of each month as a step series.

    Months absent between the first and last row have no transactions and
    contribute zeros (means are zero there too).
    """
    if column not in MONTHLY_HEADER[1:]:
        raise ValueError(f"unknown monthly column {column!r}")
    if not rows:
        raise DataError("no monthly rows")
    by_month = {r.month: float(getattr(r, column)) for r in rows}
    first, last = rows[0].month, rows[-1].month
    values: list[float] = []
    year, month = first
    while (year, month) <= last:
        values.extend([by_month.get((year, month), 0.0)] * calendar.monthrange(year, month)[1])
        year, month = (year + 1, 1) if month == 12 else (year, month + 1)
    return DailySeries(name or column, date(first[0], first[1], 1), tuple(values))
