import datetime as dt

import numpy as np
import pytest

from rpvol.ingest import SessionCalendar, TickRecord
from rpvol.returns import IntradayReturns


def make_ticks(day, times_prices, contract="H24", volume=10):
    """Build TickRecords for one day from (HH:MM[:SS] string, price) pairs."""
    out = []
    for t, p in times_prices:
        parts = [int(x) for x in t.split(":")]
        tod = dt.time(*parts)
        out.append(TickRecord(dt.datetime.combine(day, tod), p, volume, contract))
    return out


def full_session_ticks(day, cal=None, price=6000.0, contract="H24", volume=10):
    """One trade exactly at every grid point of the session."""
    cal = cal or SessionCalendar()
    out = []
    for t in cal.grid_times():
        out.append(TickRecord(dt.datetime.combine(day, t), price, volume, contract))
    return out


def intra_from_rows(rows):
    """IntradayReturns from a list of per-day return lists (percent)."""
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    days = tuple(dt.date(2024, 1, 1) + dt.timedelta(days=i) for i in range(arr.shape[0]))
    return IntradayReturns(days, arr)


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)
