"""Tick ingestion: parsing, volume-crossover contract rolling, grid sampling.

Input format (UTF-8 text):

    timestamp,price,volume,contract
    2024-01-03T08:35,6930.0,120,H24

Timestamps are ISO-8601 at minute or second precision and are taken as
exchange-local wall-clock time, no zone conversion. The companion calendar
file lists dates to exclude, one ISO date per line under an
``excluded_date`` header.
"""

from __future__ import annotations

import datetime as dt
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DataQualityError, InvalidParameterError, TickFormatError

TICK_HEADER = "timestamp,price,volume,contract"
CALENDAR_HEADER = "excluded_date"

#: Longest run of consecutive trade-free intervals tolerated before a day is dropped.
DEFAULT_MAX_GAP_INTERVALS = 12


@dataclass(frozen=True)
class TickRecord:
    """A single trade print."""

    timestamp: dt.datetime
    price: float
    volume: int
    contract_id: str

    @property
    def day(self) -> dt.date:
        return self.timestamp.date()

    @property
    def second_of_day(self) -> float:
        t = self.timestamp
        return t.hour * 3600.0 + t.minute * 60.0 + t.second + t.microsecond / 1e6


@dataclass(frozen=True)
class SessionCalendar:
    """Trading session layout defining the intraday sampling grid.

    The default 08:35-17:35 session at 5-minute spacing gives 108 grid
    points, hence 107 intervals per day.
    """

    session_open: dt.time = dt.time(8, 35)
    session_close: dt.time = dt.time(17, 35)
    interval_minutes: int = 5
    excluded_dates: frozenset = frozenset()

    def __post_init__(self) -> None:
        if self.interval_minutes <= 0:
            raise InvalidParameterError("interval_minutes must be positive")
        span = self._close_s - self._open_s
        if span <= 0:
            raise InvalidParameterError("session_close must be after session_open")
        if span % (self.interval_minutes * 60) != 0:
            raise InvalidParameterError(
                "session length must be an exact multiple of interval_minutes"
            )

    @property
    def _open_s(self) -> int:
        t = self.session_open
        return t.hour * 3600 + t.minute * 60 + t.second

    @property
    def _close_s(self) -> int:
        t = self.session_close
        return t.hour * 3600 + t.minute * 60 + t.second

    @property
    def n_intervals(self) -> int:
        return (self._close_s - self._open_s) // (self.interval_minutes * 60)

    def grid_seconds(self) -> np.ndarray:
        """Second-of-day for every grid point (n_intervals + 1 values)."""
        step = self.interval_minutes * 60
        return np.arange(self._open_s, self._close_s + step, step, dtype=float)

    def grid_times(self) -> list[dt.time]:
        out = []
        for s in self.grid_seconds():
            s = int(s)
            out.append(dt.time(s // 3600, (s % 3600) // 60, s % 60))
        return out


@dataclass(frozen=True)
class ParseIssue:
    line_no: int
    message: str
    content: str


@dataclass
class TickParseResult:
    """Parsed records plus the per-line error report for malformed input."""

    records: list[TickRecord]
    issues: list[ParseIssue]


def parse_ticks(lines: Iterable[str], strict: bool = False) -> TickParseResult:
    """Parse the tick file format.

    Malformed lines are collected into the issue report and skipped; in
    strict mode the first malformed line raises ``TickFormatError``. A
    missing or wrong header is always fatal.
    """
    it = iter(lines)
    try:
        header = next(it)
    except StopIteration:
        raise TickFormatError("empty input: missing tick header") from None
    if header.lstrip("﻿").strip() != TICK_HEADER:
        raise TickFormatError(
            f"bad tick header: expected '{TICK_HEADER}', got '{header.strip()}'"
        )

    records: list[TickRecord] = []
    issues: list[ParseIssue] = []

    def bad(line_no: int, message: str, content: str) -> None:
        if strict:
            raise TickFormatError(f"line {line_no}: {message}")
        issues.append(ParseIssue(line_no, message, content))

    for line_no, raw in enumerate(it, start=2):
        line = raw.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            bad(line_no, f"expected 4 comma-separated fields, got {len(parts)}", line)
            continue
        ts_text, price_text, volume_text, contract = parts
        try:
            ts = dt.datetime.fromisoformat(ts_text)
        except ValueError:
            bad(line_no, f"unparseable timestamp '{ts_text}'", line)
            continue
        try:
            price = float(price_text)
        except ValueError:
            bad(line_no, f"unparseable price '{price_text}'", line)
            continue
        if not np.isfinite(price) or price <= 0:
            bad(line_no, f"price must be a positive real, got '{price_text}'", line)
            continue
        try:
            volume = int(volume_text)
        except ValueError:
            bad(line_no, f"unparseable volume '{volume_text}'", line)
            continue
        if volume < 0:
            bad(line_no, f"volume must be non-negative, got {volume}", line)
            continue
        if not contract:
            bad(line_no, "empty contract id", line)
            continue
        records.append(TickRecord(ts, price, volume, contract))
    return TickParseResult(records, issues)


def parse_tick_file(path: str | Path, strict: bool = False) -> TickParseResult:
    with open(path, encoding="utf-8") as fh:
        return parse_ticks(fh, strict=strict)


def parse_calendar(lines: Iterable[str]) -> frozenset:
    """Parse the exclusion calendar: header line, then one ISO date per line."""
    it = iter(lines)
    try:
        header = next(it)
    except StopIteration:
        raise TickFormatError("empty input: missing calendar header") from None
    if header.lstrip("﻿").strip() != CALENDAR_HEADER:
        raise TickFormatError(
            f"bad calendar header: expected '{CALENDAR_HEADER}', got '{header.strip()}'"
        )
    days = set()
    for line_no, raw in enumerate(it, start=2):
        line = raw.strip()
        if not line:
            continue
        try:
            days.add(dt.date.fromisoformat(line))
        except ValueError:
            raise TickFormatError(f"calendar line {line_no}: unparseable date '{line}'") from None
    return frozenset(days)


def parse_calendar_file(path: str | Path) -> frozenset:
    with open(path, encoding="utf-8") as fh:
        return parse_calendar(fh)


def format_tick_line(rec: TickRecord) -> str:
    ts = rec.timestamp
    if ts.second == 0 and ts.microsecond == 0:
        stamp = ts.strftime("%Y-%m-%dT%H:%M")
    else:
        stamp = ts.strftime("%Y-%m-%dT%H:%M:%S")
    return f"{stamp},{float(rec.price)!r},{rec.volume},{rec.contract_id}"


def write_tick_file(path: str | Path, records: Iterable[TickRecord]) -> None:
    lines = [TICK_HEADER]
    lines.extend(format_tick_line(r) for r in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def roll_contracts(ticks: Iterable[TickRecord]) -> list[TickRecord]:
    """Collapse overlapping delivery months into one continuous series.

    The active contract on the first day is the highest-volume contract that
    day. It hands over on the first day some other never-previously-active
    contract's total daily volume strictly exceeds the incumbent's; handovers
    are permanent. Ties keep the incumbent. Each output day contains only the
    active contract's ticks.
    """
    ticks = list(ticks)
    if not ticks:
        return []
    appearance: dict[str, int] = {}
    day_ticks: dict[dt.date, list[TickRecord]] = defaultdict(list)
    day_volume: dict[dt.date, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for t in ticks:
        appearance.setdefault(t.contract_id, len(appearance))
        day_ticks[t.day].append(t)
        day_volume[t.day][t.contract_id] += t.volume
    days = sorted(day_ticks)

    first_vols = day_volume[days[0]]
    active = min(first_vols, key=lambda c: (-first_vols[c], appearance[c]))
    retired: set[str] = set()
    out: list[TickRecord] = []
    for day in days:
        vols = day_volume[day]
        incumbent_vol = vols.get(active, 0)
        challengers = [
            c for c in vols if c != active and c not in retired and vols[c] > incumbent_vol
        ]
        if challengers:
            successor = min(challengers, key=lambda c: (-vols[c], appearance[c]))
            retired.add(active)
            active = successor
        out.extend(t for t in day_ticks[day] if t.contract_id == active)
    return out


@dataclass(frozen=True)
class DroppedDay:
    day: dt.date
    reason: str


@dataclass
class IntradayGrid:
    """Per-day previous-tick sampled prices on the session grid."""

    days: tuple
    prices: np.ndarray  # shape (n_days, n_intervals + 1)
    calendar: SessionCalendar
    dropped: tuple = ()

    @property
    def n_days(self) -> int:
        return len(self.days)


def build_grid(
    ticks: Iterable[TickRecord],
    cal: SessionCalendar | None = None,
    max_gap_intervals: int = DEFAULT_MAX_GAP_INTERVALS,
) -> IntradayGrid:
    """Sample a continuous tick series onto the session grid, day by day.

    Each grid point takes the last trade price at or before it
    (previous-tick sampling). A day is dropped when it is in the exclusion
    calendar, when no trade exists at or before the first grid point, or
    when more than ``max_gap_intervals`` consecutive intervals pass without
    a trade. Zero retained days is fatal.
    """
    cal = cal or SessionCalendar()
    if max_gap_intervals < 0:
        raise InvalidParameterError("max_gap_intervals must be >= 0")
    grid = cal.grid_seconds()

    per_day: dict[dt.date, list[TickRecord]] = defaultdict(list)
    for t in ticks:
        per_day[t.day].append(t)

    days: list[dt.date] = []
    rows: list[np.ndarray] = []
    dropped: list[DroppedDay] = []
    for day in sorted(per_day):
        if day in cal.excluded_dates:
            dropped.append(DroppedDay(day, "excluded date"))
            continue
        dticks = sorted(per_day[day], key=lambda t: t.second_of_day)  # stable: ties keep input order
        secs = np.array([t.second_of_day for t in dticks])
        px = np.array([t.price for t in dticks], dtype=float)
        idx = np.searchsorted(secs, grid, side="right") - 1
        if idx[0] < 0:
            dropped.append(DroppedDay(day, "no trade at or before the first grid point"))
            continue
        empty = np.diff(idx) == 0  # True when interval (g[j-1], g[j]] saw no trade
        longest = _longest_run(empty)
        if longest > max_gap_intervals:
            dropped.append(
                DroppedDay(day, f"max-gap exceeded ({longest} consecutive empty intervals)")
            )
            continue
        days.append(day)
        rows.append(px[idx])

    if not days:
        detail = "; ".join(f"{d.day}: {d.reason}" for d in dropped) or "no input days"
        raise DataQualityError(f"no retained trading days ({detail})")
    return IntradayGrid(tuple(days), np.vstack(rows), cal, tuple(dropped))


def _longest_run(flags: np.ndarray) -> int:
    longest = run = 0
    for f in flags:
        run = run + 1 if f else 0
        if run > longest:
            longest = run
    return longest
