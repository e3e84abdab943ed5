"""Percent log returns at the grid spacing and aggregated per day."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataQualityError
from .ingest import IntradayGrid


@dataclass(frozen=True)
class IntradayReturns:
    """Percent log returns, one row per retained day."""

    days: tuple
    returns: np.ndarray  # shape (n_days, n_intervals)

    @property
    def n_intervals(self) -> int:
        return self.returns.shape[1]


@dataclass(frozen=True)
class DailyReturns:
    days: tuple
    r: np.ndarray


def intraday_log_returns(grid: IntradayGrid) -> IntradayReturns:
    """First-difference the log grid prices, scaled to percent."""
    if not np.all(np.isfinite(grid.prices)) or np.any(grid.prices <= 0):
        raise DataQualityError("grid prices must be finite and strictly positive")
    rets = 100.0 * np.diff(np.log(grid.prices), axis=1)
    return IntradayReturns(tuple(grid.days), rets)


def daily_return(intra: IntradayReturns) -> DailyReturns:
    """Sum each day's intraday returns; telescopes to 100*(ln close - ln open)."""
    return DailyReturns(intra.days, intra.returns.sum(axis=1))
