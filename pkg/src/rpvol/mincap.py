"""Minimum capital requirements from standardized-return quantiles.

For a volatility forecast sigma in percent and a standardized-return
quantile z_q, the capital fraction in percent of total investment is

    long:  (1 - exp(s * z_q)) * 100   with z_q the lower-tail quantile,
    short: (exp(s * z_q) - 1) * 100   with z_q the upper-tail quantile,

where s = sigma / 100 converts the percent forecast to a decimal. Both
expressions are positive whenever the selected quantile sits on the loss
side of zero. Interval estimates come from distribution-free binomial
order-statistic brackets on the z quantile, mapped through the same
formula and re-ordered afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

from .errors import InsufficientDataError, InvalidParameterError
from .powervar import PowerVariationSpec, StandardizedReturns, VolatilitySeries
from .stats import empirical_quantile

POSITIONS = ("long", "short")
FORECAST_RULES = ("last_day", "rolling_mean", "full_mean")


@dataclass(frozen=True)
class MincapRequest:
    coverage: float = 0.95
    position: str = "long"
    vol_forecast_rule: str = "last_day"
    rolling_window: int | None = None
    proxy_spec: PowerVariationSpec = field(default_factory=PowerVariationSpec)
    ci_level: float = 0.95

    def __post_init__(self) -> None:
        if not 0.5 < self.coverage < 1.0:
            raise InvalidParameterError(f"coverage must lie in (0.5, 1), got {self.coverage}")
        if self.position not in POSITIONS:
            raise InvalidParameterError(f"position must be one of {POSITIONS}")
        if self.vol_forecast_rule not in FORECAST_RULES:
            raise InvalidParameterError(f"vol_forecast_rule must be one of {FORECAST_RULES}")
        if self.vol_forecast_rule == "rolling_mean" and (
            self.rolling_window is None or self.rolling_window < 1
        ):
            raise InvalidParameterError("rolling_mean requires rolling_window >= 1")
        if not 0.0 < self.ci_level < 1.0:
            raise InvalidParameterError("ci_level must lie in (0, 1)")


@dataclass(frozen=True)
class MincapEstimate:
    lambda_pct: float
    ci_low: float
    ci_high: float
    coverage: float
    position: str
    z_quantile_used: float
    sigma_forecast_used: float


def vol_forecast(vol: VolatilitySeries, rule: str = "last_day", window: int | None = None) -> float:
    """Volatility forecast from a proxy series under the chosen rule."""
    s = np.asarray(vol.sigma, dtype=float)
    if s.size == 0:
        raise InsufficientDataError("empty volatility series")
    if rule == "last_day":
        return float(s[-1])
    if rule == "rolling_mean":
        if window is None or window < 1:
            raise InvalidParameterError("rolling_mean requires window >= 1")
        if window > s.size:
            raise InsufficientDataError(
                f"rolling window {window} exceeds series length {s.size}"
            )
        return float(s[-window:].mean())
    if rule == "full_mean":
        return float(s.mean())
    raise InvalidParameterError(f"unknown forecast rule '{rule}'")


def _lambda_pct(z_q: float, s: float, position: str) -> float:
    if position == "long":
        return (1.0 - math.exp(s * z_q)) * 100.0
    return (math.exp(s * z_q) - 1.0) * 100.0


def min_n_for_quantile_ci(q: float, ci_level: float) -> int:
    """Smallest sample size for which the order-statistic bracket exists.

    Needs (1-q)**n < alpha/2 (a rank above zero exists on the left) and
    q**n <= alpha/2 (the right rank stays within the sample).
    """
    alpha = 1.0 - ci_level
    n_lo = math.ceil(math.log(alpha / 2.0) / math.log(1.0 - q))
    n_hi = math.ceil(math.log(alpha / 2.0) / math.log(q))
    return max(2, n_lo, n_hi)


def quantile_ci_ranks(n: int, q: float, ci_level: float) -> tuple[int, int]:
    """One-based order-statistic ranks bracketing the q-quantile at ci_level."""
    alpha = 1.0 - ci_level
    lo = int(binom.ppf(alpha / 2.0, n, q))
    hi = int(binom.ppf(1.0 - alpha / 2.0, n, q)) + 1
    if lo < 1 or hi > n:
        raise InsufficientDataError(
            f"n={n} is too small for a {ci_level:.0%} order-statistic interval on the "
            f"{q:.4g} quantile; minimum n is {min_n_for_quantile_ci(q, ci_level)}"
        )
    return lo, hi


def mincap_ci(z: StandardizedReturns, sigma_hat: float, req: MincapRequest) -> tuple[float, float]:
    """Confidence interval for the capital fraction, in percent.

    Order-statistic endpoints on the z quantile are mapped through the
    capital formula; the bracket is widened, never narrowed, so it always
    contains the interpolated point estimate.
    """
    zv = np.sort(np.asarray(z.z, dtype=float))
    n = zv.size
    if n == 0:
        raise InsufficientDataError("empty standardized-return series")
    if sigma_hat <= 0:
        raise InvalidParameterError("sigma_hat must be positive")
    q = 1.0 - req.coverage if req.position == "long" else req.coverage
    lo, hi = quantile_ci_ranks(n, q, req.ci_level)
    pos = q * (n - 1) + 1.0
    lo = min(lo, int(math.floor(pos)))
    hi = max(hi, int(math.ceil(pos)))
    s = sigma_hat / 100.0
    mapped = sorted(
        (_lambda_pct(float(zv[lo - 1]), s, req.position),
         _lambda_pct(float(zv[hi - 1]), s, req.position))
    )
    return mapped[0], mapped[1]


def mincap(z: StandardizedReturns, sigma_hat: float, req: MincapRequest) -> MincapEstimate:
    """Point estimate of the minimum capital fraction plus its interval."""
    zv = np.asarray(z.z, dtype=float)
    if zv.size == 0:
        raise InsufficientDataError("empty standardized-return series")
    if sigma_hat <= 0:
        raise InvalidParameterError("sigma_hat must be positive")
    s = sigma_hat / 100.0
    q = 1.0 - req.coverage if req.position == "long" else req.coverage
    z_q = empirical_quantile(zv, q)
    lam = _lambda_pct(z_q, s, req.position)
    ci_low, ci_high = mincap_ci(z, sigma_hat, req)
    return MincapEstimate(
        lambda_pct=lam,
        ci_low=ci_low,
        ci_high=ci_high,
        coverage=req.coverage,
        position=req.position,
        z_quantile_used=z_q,
        sigma_forecast_used=sigma_hat,
    )
