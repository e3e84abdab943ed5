"""Realized power variation volatility proxies and standardized returns.

A day's proxy with per-interval exponent p is ``sum_j |r_j|**p`` over the m
intraday returns of that day. The absolute base uses p equal to the
configured power c, the squared base uses p = 2c, so (absolute, c) and
(squared, c/2) are the same series by construction.

The normalized estimator

    m**(p/2 - 1) / mu_p * sum_j |r_j|**p,   mu_p = E|N(0,1)|**p

targets the integral of sigma**p over the day and is what convergence
testing checks against simulated ground truth. For p = 2 the factor is one
and the estimator is plain realized variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma

from .errors import InvalidParameterError, MisalignedDaysError
from .returns import DailyReturns, IntradayReturns

BASES = ("absolute", "squared")


@dataclass(frozen=True)
class PowerVariationSpec:
    """Estimator parameterization: base series, power, optional normalization."""

    base: str = "absolute"
    power: float = 1.0
    normalized: bool = False
    intervals_m: int | None = None

    def __post_init__(self) -> None:
        if self.base not in BASES:
            raise InvalidParameterError(f"base must be one of {BASES}, got '{self.base}'")
        if not (isinstance(self.power, (int, float)) and math.isfinite(self.power) and self.power > 0):
            raise InvalidParameterError("power must be a positive finite real")
        if self.intervals_m is not None and self.intervals_m < 1:
            raise InvalidParameterError("intervals_m must be a positive integer")
        if self.normalized and not 0.5 <= self.effective_exponent < 3.0:
            raise InvalidParameterError(
                "normalized mode requires a per-interval exponent in [0.5, 3); "
                f"got {self.effective_exponent}"
            )

    @property
    def effective_exponent(self) -> float:
        """Per-interval exponent: c for the absolute base, 2c for the squared base."""
        return float(self.power) if self.base == "absolute" else 2.0 * float(self.power)

    @property
    def label(self) -> str:
        tag = f"{self.base}_p{self.power:.2f}"
        return f"{tag}_norm" if self.normalized else tag


@dataclass(frozen=True)
class NormalAbsMoment:
    """Absolute moment E|N(0,1)|**p used to debias power variation sums."""

    p: float
    mu_p: float

    @classmethod
    def for_power(cls, p: float) -> "NormalAbsMoment":
        if p <= 0:
            raise InvalidParameterError("moment order must be positive")
        mu = 2.0 ** (p / 2.0) * _gamma((p + 1.0) / 2.0) / math.sqrt(math.pi)
        return cls(p=float(p), mu_p=float(mu))


@lru_cache(maxsize=128)
def normal_abs_moment(p: float) -> float:
    return NormalAbsMoment.for_power(p).mu_p


@dataclass(frozen=True)
class VolatilitySeries:
    days: tuple
    sigma: np.ndarray
    spec: PowerVariationSpec


@dataclass(frozen=True)
class StandardizedReturns:
    days: tuple
    z: np.ndarray
    proxy_spec: PowerVariationSpec
    excluded_days: tuple = ()


def realized_power_variation(intra: IntradayReturns, p: float) -> np.ndarray:
    """Per-day sum of |return|**p across the intraday grid."""
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 0):
        raise InvalidParameterError("power variation exponent must be positive")
    return np.sum(np.abs(intra.returns) ** float(p), axis=1)


def volatility_proxy(intra: IntradayReturns, spec: PowerVariationSpec) -> VolatilitySeries:
    """Daily volatility proxy for the given spec.

    The exponent is applied per interval before summation, which makes the
    absolute and squared bases coincide bit for bit whenever their effective
    exponents match.
    """
    if spec.intervals_m is not None and spec.intervals_m != intra.n_intervals:
        raise InvalidParameterError(
            f"spec expects {spec.intervals_m} intervals per day, data has {intra.n_intervals}"
        )
    p = spec.effective_exponent
    if spec.normalized:
        sigma = normalized_rpv(intra, p)
    else:
        sigma = realized_power_variation(intra, p)
    return VolatilitySeries(intra.days, sigma, spec)


def normalized_rpv(intra: IntradayReturns, p: float, m: int | None = None) -> np.ndarray:
    """Debiased power variation, an estimate of the day's integrated sigma**p."""
    if not 0.5 <= p < 3.0:
        raise InvalidParameterError(f"normalized mode requires 0.5 <= p < 3, got {p}")
    if m is None:
        m = intra.n_intervals
    elif m != intra.n_intervals:
        raise InvalidParameterError(
            f"m={m} does not match the data's {intra.n_intervals} intervals per day"
        )
    factor = m ** (p / 2.0 - 1.0) / normal_abs_moment(float(p))
    return factor * realized_power_variation(intra, p)


def standardize(daily: DailyReturns, vol: VolatilitySeries) -> StandardizedReturns:
    """Scale each daily return by the same-day proxy value.

    Days with a zero proxy (equivalently, all-zero intraday returns) are
    excluded from the result and reported in ``excluded_days``.
    """
    if tuple(daily.days) != tuple(vol.days):
        raise MisalignedDaysError("daily returns and volatility series cover different days")
    keep = vol.sigma > 0
    z = daily.r[keep] / vol.sigma[keep]
    days = tuple(d for d, k in zip(daily.days, keep) if k)
    excluded = tuple(d for d, k in zip(daily.days, keep) if not k)
    return StandardizedReturns(days, z, vol.spec, excluded)
