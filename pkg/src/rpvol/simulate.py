"""Stochastic-volatility price simulator with known integrated volatility.

Log prices evolve on a fine Euler grid with one trading day as the unit
time interval and everything in percent units:

    dp = mu dt + sigma_t sqrt(dt) * eps,   eps iid N(0, 1).

Spot volatility is either constant or log Ornstein-Uhlenbeck,

    d ln sigma = kappa (ln theta - ln sigma) dt + xi dB,

with B independent of the price shocks and the state carried across days
so volatility clusters at the daily horizon. Ground truth per day is the
left-point Riemann sum of sigma**p on the fine grid; the fine grid defines
truth for convergence tests.

Noise is drawn from per-day substreams keyed by (seed, day index), price
shocks before volatility shocks, so output is reproducible bit for bit and
a log-OU run with xi = 0 coincides exactly with the constant model at the
same seed.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidParameterError
from .powervar import normalized_rpv
from .returns import IntradayReturns

#: First simulated calendar day (a Monday); weekends are skipped.
DEFAULT_START_DAY = dt.date(2024, 1, 1)


@dataclass(frozen=True)
class ConstantVol:
    """Constant spot volatility, in percent per square-root day."""

    sigma: float = 1.3

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise InvalidParameterError("constant volatility must be positive")


@dataclass(frozen=True)
class LogOuVol:
    """Mean-reverting log volatility: speed kappa, level theta, vol-of-vol xi."""

    kappa: float = 0.1
    theta: float = 1.3
    xi: float = 0.3

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise InvalidParameterError("kappa must be positive")
        if not self.theta > 0:
            raise InvalidParameterError("theta must be positive")
        if self.xi < 0:
            raise InvalidParameterError("xi must be non-negative")

    @classmethod
    def with_mean_sigma(cls, mean_sigma: float = 1.3, kappa: float = 0.1, xi: float = 0.3) -> "LogOuVol":
        """Pick theta so the stationary mean of sigma equals ``mean_sigma``.

        ln sigma is stationary N(ln theta, xi**2 / (2 kappa)), so
        E[sigma] = theta * exp(xi**2 / (4 kappa)).
        """
        if not mean_sigma > 0:
            raise InvalidParameterError("mean_sigma must be positive")
        theta = mean_sigma * math.exp(-(xi * xi) / (4.0 * kappa))
        return cls(kappa=kappa, theta=theta, xi=xi)


@dataclass(frozen=True)
class SvConfig:
    days: int = 375
    intervals_m: int = 107
    fine_steps_per_interval: int = 10
    spot_vol_model: ConstantVol | LogOuVol = LogOuVol()
    drift: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.days < 1:
            raise InvalidParameterError("days must be >= 1")
        if self.intervals_m < 1:
            raise InvalidParameterError("intervals_m must be >= 1")
        if self.fine_steps_per_interval < 10:
            raise InvalidParameterError("fine_steps_per_interval must be >= 10")

    @property
    def n_fine(self) -> int:
        return self.intervals_m * self.fine_steps_per_interval


@dataclass(frozen=True)
class SimOutput:
    returns: IntradayReturns
    true_integrated: dict  # power -> per-day integral of sigma**p
    spot_vol: np.ndarray  # shape (days, n_fine), fine-grid left endpoints
    config: SvConfig


def trading_days(n: int, start: dt.date = DEFAULT_START_DAY) -> tuple:
    out = []
    d = start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += dt.timedelta(days=1)
    return tuple(out)


def _draw_noise(config: SvConfig, want_vol_shocks: bool) -> tuple[np.ndarray, np.ndarray | None]:
    """Per-day substreams: price shocks first, then volatility shocks."""
    n_fine = config.n_fine
    eps = np.empty((config.days, n_fine))
    eta = np.empty((config.days, n_fine)) if want_vol_shocks else None
    for d in range(config.days):
        rng = np.random.default_rng([config.seed, d + 1])
        eps[d] = rng.standard_normal(n_fine)
        if eta is not None:
            eta[d] = rng.standard_normal(n_fine)
    return eps, eta


def _spot_vol(config: SvConfig, eta: np.ndarray | None) -> np.ndarray:
    model = config.spot_vol_model
    n_total = config.days * config.n_fine
    if isinstance(model, ConstantVol):
        return np.full((config.days, config.n_fine), float(model.sigma))
    dt_step = 1.0 / config.n_fine
    ln_theta = math.log(model.theta)
    a = 1.0 - model.kappa * dt_step
    drive = model.kappa * ln_theta * dt_step + model.xi * math.sqrt(dt_step) * eta.ravel()
    stat_sd = model.xi / math.sqrt(2.0 * model.kappa)
    ln0 = ln_theta + stat_sd * float(np.random.default_rng([config.seed, 0]).standard_normal())
    # Euler recursion ln s_{i+1} = a * ln s_i + drive_i, run as an AR(1) filter.
    states = lfilter([1.0], [1.0, -a], drive, zi=np.array([a * ln0]))[0]
    ln_path = np.concatenate(([ln0], states[: n_total - 1]))
    return np.exp(ln_path).reshape(config.days, config.n_fine)


def _simulate_fine(config: SvConfig) -> tuple[np.ndarray, np.ndarray]:
    """Fine-grid percent log-price increments and the spot vol path."""
    want_vol = isinstance(config.spot_vol_model, LogOuVol)
    eps, eta = _draw_noise(config, want_vol)
    sigma = _spot_vol(config, eta)
    dt_step = 1.0 / config.n_fine
    fine = config.drift * dt_step + sigma * math.sqrt(dt_step) * eps
    return fine, sigma


def simulate_sv(config: SvConfig, p_set: tuple = (1.0, 2.0)) -> SimOutput:
    """Simulate intraday returns with per-day integrated sigma**p ground truth."""
    fine, sigma = _simulate_fine(config)
    coarse = fine.reshape(config.days, config.intervals_m, -1).sum(axis=2)
    days = trading_days(config.days)
    dt_step = 1.0 / config.n_fine
    truth = {float(p): (sigma ** float(p)).sum(axis=1) * dt_step for p in p_set}
    return SimOutput(
        returns=IntradayReturns(days, coarse),
        true_integrated=truth,
        spot_vol=sigma,
        config=config,
    )


@dataclass(frozen=True)
class ConvergenceCell:
    p: float
    m: int
    mare: float


@dataclass(frozen=True)
class ConvergenceReport:
    cells: tuple
    monotone_decreasing: dict  # power -> bool over the ascending m grid


def convergence_report(
    config: SvConfig,
    p_set: tuple = (1.0, 2.0),
    m_set: tuple = (24, 107, 428),
) -> ConvergenceReport:
    """Mean absolute relative error of the debiased estimator per (p, m).

    All sampling frequencies are carved out of one fine-grid simulation, so
    every m is evaluated on identical price paths. Each m must divide the
    fine grid evenly.
    """
    n_fine = config.n_fine
    m_set = tuple(sorted(int(m) for m in m_set))
    for m in m_set:
        if m < 1 or n_fine % m != 0:
            raise InvalidParameterError(
                f"m={m} does not divide the fine grid of {n_fine} steps per day"
            )
    fine, sigma = _simulate_fine(config)
    dt_step = 1.0 / n_fine
    days = trading_days(config.days)
    truth = {float(p): (sigma ** float(p)).sum(axis=1) * dt_step for p in p_set}

    cells = []
    for p in p_set:
        for m in m_set:
            coarse = fine.reshape(config.days, m, -1).sum(axis=2)
            est = normalized_rpv(IntradayReturns(days, coarse), float(p), m)
            mare = float(np.mean(np.abs(est - truth[float(p)]) / truth[float(p)]))
            cells.append(ConvergenceCell(p=float(p), m=m, mare=mare))
    monotone = {}
    for p in p_set:
        errs = [c.mare for c in cells if c.p == float(p)]
        monotone[float(p)] = all(b < a for a, b in zip(errs, errs[1:]))
    return ConvergenceReport(cells=tuple(cells), monotone_decreasing=monotone)


def simulated_tick_records(
    sim: SimOutput,
    cal=None,
    start_price: float = 6000.0,
    volume: int = 100,
    contract_id: str = "SYN1",
) -> list:
    """Render a simulation as tick records, one synthetic trade per grid point.

    Prices are continuous across days (each day opens at the previous
    close), so re-ingesting the file reproduces the simulated returns.
    """
    from .ingest import SessionCalendar, TickRecord

    cal = cal or SessionCalendar()
    if cal.n_intervals != sim.returns.n_intervals:
        raise InvalidParameterError(
            f"calendar has {cal.n_intervals} intervals per day, simulation has "
            f"{sim.returns.n_intervals}"
        )
    times = cal.grid_times()
    lp = math.log(start_price)
    records = []
    for i, day in enumerate(sim.returns.days):
        for j, t in enumerate(times):
            if j > 0:
                lp += float(sim.returns.returns[i, j - 1]) / 100.0
            records.append(
                TickRecord(dt.datetime.combine(day, t), float(math.exp(lp)), volume, contract_id)
            )
    return records
