"""Distributional and serial-dependence diagnostics.

Moment conventions: central moments use divisor n, the standard deviation
uses n-1. Skewness is g1 = m3 / m2**1.5 and kurtosis is reported in excess
form g2 = m4 / m2**2 - 3, so a normal series scores zero on both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    InvalidParameterError,
)

ACF_TRANSFORMS = ("identity", "square")


@dataclass(frozen=True)
class SummaryStats:
    """Four-moment summary with moment-based significance flags.

    Under normal iid data, skewness and excess kurtosis have sampling
    variances 6/n and 24/n; a coefficient is flagged significant when its
    magnitude exceeds twice the corresponding standard error.
    """

    n: int
    mean: float
    sd: float
    skewness: float
    excess_kurtosis: float
    se_skew: float
    se_kurt: float
    skew_significant: bool
    kurt_significant: bool

    @property
    def two_se_skew(self) -> float:
        return 2.0 * self.se_skew

    @property
    def two_se_kurt(self) -> float:
        return 2.0 * self.se_kurt


def summary(series) -> SummaryStats:
    x = np.asarray(series, dtype=float).ravel()
    n = int(x.size)
    if n < 4:
        raise InsufficientDataError(
            f"need at least 4 observations for moment diagnostics, got {n}"
        )
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        raise DegenerateSeriesError("constant series has undefined skewness and kurtosis")
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    sd = float(x.std(ddof=1))
    g1 = m3 / m2**1.5
    g2 = m4 / (m2 * m2) - 3.0
    se_skew = math.sqrt(6.0 / n)
    se_kurt = math.sqrt(24.0 / n)
    return SummaryStats(
        n=n,
        mean=mean,
        sd=sd,
        skewness=g1,
        excess_kurtosis=g2,
        se_skew=se_skew,
        se_kurt=se_kurt,
        skew_significant=abs(g1) > 2.0 * se_skew,
        kurt_significant=abs(g2) > 2.0 * se_kurt,
    )


@dataclass(frozen=True)
class AcfResult:
    lags: np.ndarray
    rho: np.ndarray
    band: float
    n_outside: int


def acf(series, lags: int = 20, transform: str = "identity") -> AcfResult:
    """Sample autocorrelations for lags 1..L with the 1.96/sqrt(n) band.

    ``transform="square"`` correlates the squared series, the usual check
    for volatility clustering in an otherwise uncorrelated series.
    """
    if transform not in ACF_TRANSFORMS:
        raise InvalidParameterError(f"transform must be one of {ACF_TRANSFORMS}")
    x = np.asarray(series, dtype=float).ravel()
    if transform == "square":
        x = x * x
    n = x.size
    if lags < 1 or lags >= n:
        raise InvalidParameterError(f"lag count must satisfy 1 <= L < n, got L={lags}, n={n}")
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise DegenerateSeriesError("series is constant after the transform")
    rho = np.array([float(np.dot(d[:-k], d[k:])) / denom for k in range(1, lags + 1)])
    band = 1.96 / math.sqrt(n)
    n_outside = int(np.sum(np.abs(rho) > band))
    return AcfResult(lags=np.arange(1, lags + 1), rho=rho, band=band, n_outside=n_outside)


def empirical_quantile(series, alpha: float) -> float:
    """Order-statistic quantile, linearly interpolated at rank alpha*(n-1)+1."""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    x = np.sort(np.asarray(series, dtype=float).ravel())
    n = x.size
    if n < 1:
        raise InsufficientDataError("empty series has no quantiles")
    pos = alpha * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    w = pos - lo
    return float(x[lo] + w * (x[hi] - x[lo]))


@dataclass(frozen=True)
class DistributionData:
    """Plot-ready density and q-q data for one series."""

    bin_left: np.ndarray
    bin_right: np.ndarray
    count: np.ndarray
    qq_theoretical: np.ndarray
    qq_empirical: np.ndarray


def distribution_data(series) -> DistributionData:
    """Histogram (Freedman-Diaconis width) plus standard-normal q-q pairs.

    The q-q side standardizes the series by its own mean and standard
    deviation and pairs the sorted values with normal quantiles at the
    plotting positions (i - 0.5)/n.
    """
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if n < 10:
        raise InsufficientDataError(f"need at least 10 observations, got {n}")
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        raise DegenerateSeriesError("constant series has no distribution shape")
    count, edges = np.histogram(x, bins="fd")
    xs = np.sort(x)
    zs = (xs - x.mean()) / sd
    pp = (np.arange(1, n + 1) - 0.5) / n
    theo = norm.ppf(pp)
    return DistributionData(
        bin_left=edges[:-1],
        bin_right=edges[1:],
        count=count,
        qq_theoretical=theo,
        qq_empirical=zs,
    )
