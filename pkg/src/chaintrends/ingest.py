"""Streaming parsers for transaction exports, daily price bars and raw
search-interest windows.

Transaction files can be large and dirty, so the caller picks a malformed-row
policy (``"skip"`` counts and drops bad rows, ``"abort"`` raises on the first
one). Price and trends files are small curated inputs and always abort.
"""
from __future__ import annotations

import calendar
import csv
import io
import math
import re
import time
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from typing import IO, Iterable, Iterator, Optional

from .errors import DataError, ParseError
from .series import DailySeries

TX_HEADER = ["timestamp", "gas", "gas_price", "value", "to_address", "difficulty"]
PRICE_HEADER = ["date", "close"]
SERIES_HEADER = ["date", "value"]
TRENDS_HEADER = ["window_id", "date", "value"]

POLICIES = ("skip", "abort")
MAX_REPORTED_ERRORS = 10

_FRACTION = re.compile(r"\.(\d+)")

# Ethereum mainnet genesis day.
EARLIEST_TIMESTAMP = calendar.timegm((2015, 7, 30, 0, 0, 0))


@dataclass(frozen=True, slots=True)
class TxRecord:
    timestamp: int  # epoch seconds, UTC
    gas_used: int
    gas_price_wei: int
    is_contract_creation: bool
    difficulty: Optional[int] = None


@dataclass(frozen=True)
class TrendsWindow:
    window_id: str
    start_date: date
    values: tuple[float, ...]

    def __len__(self):
        return len(self.values)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)


@dataclass
class ParseReport:
    rows_ok: int = 0
    rows_rejected: int = 0
    first_errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def rows_total(self) -> int:
        return self.rows_ok + self.rows_rejected

    def reject(self, line: int, reason: str) -> None:
        self.rows_rejected += 1
        if len(self.first_errors) < MAX_REPORTED_ERRORS:
            self.first_errors.append((line, reason))

    def absorb(self, other: ParseReport, source: str | None = None) -> None:
        """Add another report's counts; its errors are tagged with ``source``."""
        self.rows_ok += other.rows_ok
        self.rows_rejected += other.rows_rejected
        for line, reason in other.first_errors:
            if len(self.first_errors) >= MAX_REPORTED_ERRORS:
                break
            self.first_errors.append((line, f"{source}: {reason}" if source else reason))


def _text_stream(stream: IO) -> tuple[IO[str], Optional[io.TextIOWrapper]]:
    if isinstance(stream, io.TextIOBase):
        return stream, None
    wrapper = io.TextIOWrapper(stream, encoding="utf-8-sig", newline="")
    return wrapper, wrapper


def _rows(stream: IO, header: list[str]) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line_number, fields)`` for each data row after checking the header."""
    text, wrapper = _text_stream(stream)
    try:
        reader = csv.reader(text)
        try:
            first = next(reader, None)
        except (UnicodeDecodeError, csv.Error) as exc:
            raise ParseError(1, f"unreadable header: {exc}") from exc
        if first is None:
            raise ParseError(1, f"missing header, expected {','.join(header)}")
        if [c.strip() for c in first] != header:
            raise ParseError(1, f"header mismatch: got {','.join(first)}, expected {','.join(header)}")
        while True:
            try:
                row = next(reader)
            except StopIteration:
                return
            except UnicodeDecodeError as exc:
                raise ParseError(reader.line_num + 1, f"invalid UTF-8: {exc}") from exc
            except csv.Error as exc:
                raise ParseError(reader.line_num, f"malformed CSV: {exc}") from exc
            yield reader.line_num, row
    finally:
        if wrapper is not None:
            # keep the caller's byte stream open
            wrapper.detach()


def _parse_int(text: str, what: str, minimum: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"{what} is not an integer: {text!r}") from None
    if value < minimum:
        raise ValueError(f"{what} must be >= {minimum}, got {value}")
    return value


def parse_timestamp(text: str, now: float | None = None) -> int:
    """Parse ISO-8601 or integer epoch seconds into epoch seconds UTC.

    Naive ISO timestamps are taken as UTC; fractional seconds are dropped.
    """
    raw = text.strip()
    if raw.lstrip("-").isdigit():
        ts = int(raw)
    else:
        iso = raw
        if iso.endswith((" UTC", "Z", "z")):
            iso = iso.rsplit(" UTC", 1)[0] if iso.endswith(" UTC") else iso[:-1]
            iso += "+00:00"
        # fromisoformat on 3.10 takes exactly 3 or 6 fractional digits
        iso = _FRACTION.sub(lambda m: "." + (m.group(1) + "00000")[:6], iso)
        try:
            moment = datetime.fromisoformat(iso)
        except ValueError:
            raise ValueError(f"bad timestamp {text!r}") from None
        if moment.tzinfo is None:
            moment = moment.replace(tzinfo=timezone.utc)
        ts = math.floor(moment.timestamp())
    limit = time.time() if now is None else now
    if ts < EARLIEST_TIMESTAMP or ts > limit:
        raise ValueError(f"timestamp {text!r} outside [2015-07-30, now]")
    return ts


def _tx_from_fields(fields: list[str], now: float) -> TxRecord:
    if len(fields) != len(TX_HEADER):
        raise ValueError(f"expected {len(TX_HEADER)} fields, got {len(fields)}")
    ts_text, gas_text, price_text, _value, to_address, difficulty_text = fields
    difficulty_text = difficulty_text.strip()
    return TxRecord(
        timestamp=parse_timestamp(ts_text, now),
        gas_used=_parse_int(gas_text, "gas", 1),
        gas_price_wei=_parse_int(price_text, "gas_price", 0),
        is_contract_creation=not to_address.strip(),
        difficulty=_parse_int(difficulty_text, "difficulty", 0) if difficulty_text else None,
    )


def parse_transactions(stream: IO, policy: str = "skip") -> tuple[list[TxRecord], ParseReport]:
    """Parse a transaction export.

    The file is CSV with header ``timestamp,gas,gas_price,value,to_address,difficulty``.
    An empty ``to_address`` marks a contract creation; ``difficulty`` may be
    empty. ``value`` is not carried into the records.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
    now = time.time()
    records: list[TxRecord] = []
    report = ParseReport()
    for line, fields in _rows(stream, TX_HEADER):
        try:
            record = _tx_from_fields(fields, now)
        except ValueError as exc:
            if policy == "abort":
                raise ParseError(line, str(exc)) from None
            report.reject(line, str(exc))
            continue
        records.append(record)
        report.rows_ok += 1
    return records, report


def _parse_day(text: str) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise ValueError(f"bad date {text!r}") from None


def _parse_real(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"{what} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"{what} is not finite: {text!r}")
    return value


def _parse_daily(stream: IO, name: str, header: list[str], positive: bool) -> DailySeries:
    start: date | None = None
    prev: tuple[date, int] | None = None
    values: list[float] = []
    for line, fields in _rows(stream, header):
        try:
            if len(fields) != 2:
                raise ValueError(f"expected 2 fields, got {len(fields)}")
            day = _parse_day(fields[0])
            value = _parse_real(fields[1], header[1])
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
        if positive and value <= 0:
            raise ParseError(line, f"non-positive price {value!r} on {day}")
        if prev is not None:
            prev_day, prev_line = prev
            if day <= prev_day:
                raise ParseError(line, f"dates not increasing: {day} follows {prev_day} (line {prev_line})")
            if day != prev_day + timedelta(days=1):
                raise ParseError(line, f"gap in dates: {day} follows {prev_day} (line {prev_line})")
        else:
            start = day
        prev = (day, line)
        values.append(value)
    if start is None:
        raise DataError(f"series {name!r} has no data rows")
    return DailySeries(name, start, tuple(values))


def parse_prices(stream: IO, name: str = "price") -> DailySeries:
    """Parse a ``date,close`` file of consecutive daily closes (USD, all > 0)."""
    return _parse_daily(stream, name, PRICE_HEADER, positive=True)


def parse_series(stream: IO, name: str = "series") -> DailySeries:
    """Parse a ``date,value`` file such as a stitched trends or returns series."""
    return _parse_daily(stream, name, SERIES_HEADER, positive=False)


def _finish_window(window_id, start, values, line) -> TrendsWindow:
    if len(values) < 2:
        raise ParseError(line, f"window {window_id!r} has fewer than 2 days")
    top = max(values)
    if top != 100:
        raise ParseError(line, f"window {window_id!r} not normalized to 100 (max {top:g})")
    return TrendsWindow(window_id, start, tuple(values))


def parse_trends(stream: IO) -> list[TrendsWindow]:
    """Parse raw search-interest windows from ``window_id,date,value`` rows.

    Rows of one window must be contiguous and on consecutive days; each
    window must have its maximum at exactly 100.
    """
    windows: list[TrendsWindow] = []
    seen: set[str] = set()
    current: str | None = None
    start: date | None = None
    last_day: date | None = None
    values: list[float] = []
    last_line = 1
    for line, fields in _rows(stream, TRENDS_HEADER):
        try:
            if len(fields) != 3:
                raise ValueError(f"expected 3 fields, got {len(fields)}")
            window_id = fields[0].strip()
            day = _parse_day(fields[1])
            value = _parse_real(fields[2], "value")
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
        if not 0 <= value <= 100:
            raise ParseError(line, f"value {value:g} outside [0, 100]")
        if window_id != current:
            if current is not None:
                windows.append(_finish_window(current, start, values, last_line))
            if window_id in seen:
                raise ParseError(line, f"window rows not contiguous: {window_id!r} reappears")
            seen.add(window_id)
            current, start, values = window_id, day, []
        elif day != last_day + timedelta(days=1):
            raise ParseError(line, f"gap in window {window_id!r} dates: {day} follows {last_day}")
        last_day = day
        values.append(value)
        last_line = line
    if current is not None:
        windows.append(_finish_window(current, start, values, last_line))
    return windows


def format_timestamp(ts: int) -> str:
    return datetime.fromtimestamp(ts, timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def format_transactions(records: Iterable[TxRecord]) -> str:
    """Serialize records in the export schema.

    Columns the record does not carry are written as placeholders: ``value``
    as 0 and a non-empty ``to_address`` of ``0x0`` for ordinary transactions.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TX_HEADER)
    for r in records:
        writer.writerow([
            format_timestamp(r.timestamp),
            r.gas_used,
            r.gas_price_wei,
            0,
            "" if r.is_contract_creation else "0x0",
            "" if r.difficulty is None else r.difficulty,
        ])
    return out.getvalue()


def format_series(series: DailySeries, decimals: int = 4, header=SERIES_HEADER) -> str:
    lines = [",".join(header)]
    lines += [f"{d.isoformat()},{v:.{decimals}f}" for d, v in zip(series.dates, series.values)]
    return "\n".join(lines) + "\n"


def format_trends(windows: Iterable[TrendsWindow]) -> str:
    lines = [",".join(TRENDS_HEADER)]
    for w in windows:
        for i, v in enumerate(w.values):
            lines.append(f"{w.window_id},{(w.start_date + timedelta(days=i)).isoformat()},{v!r}")
    return "\n".join(lines) + "\n"
