import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import lfilter
from statsmodels.tsa.stattools import acf as sm_acf

from rpvol.errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    InvalidParameterError,
)
from rpvol.stats import acf, distribution_data, empirical_quantile, summary


class TestSummary:
    def test_threshold_constants_at_375(self):
        st375 = summary(np.random.default_rng(1).standard_normal(375))
        assert st375.two_se_skew == pytest.approx(0.253, abs=5e-4)
        assert st375.two_se_kurt == pytest.approx(0.506, abs=5e-4)

    def test_symmetric_two_point_series_has_zero_skew(self):
        st_ = summary([-1.0, 1.0] * 10)
        assert st_.skewness == 0.0
        assert st_.mean == 0.0

    def test_large_normal_sample_moments(self):
        x = np.random.default_rng(23).standard_normal(100_000)
        st_ = summary(x)
        assert abs(st_.skewness) < 0.05
        assert abs(st_.excess_kurtosis) < 0.1
        assert not st_.skew_significant
        assert not st_.kurt_significant

    def test_heavy_tails_flagged(self):
        x = np.random.default_rng(5).standard_t(3, size=2000)
        assert summary(x).kurt_significant

    def test_constant_series_undefined(self):
        with pytest.raises(DegenerateSeriesError):
            summary([2.0] * 100)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            summary([1.0, 2.0, 3.0])

    def test_sd_uses_n_minus_1(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert summary(x).sd == pytest.approx(np.std(x, ddof=1), rel=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(min_value=-100, max_value=100), min_size=5, max_size=60),
        st.floats(min_value=0.01, max_value=50),
        st.floats(min_value=-100, max_value=100),
    )
    def test_location_scale_invariance(self, xs, a, b):
        base = np.asarray(xs)
        if np.std(base) == 0 or np.std(a * base + b) == 0:
            return
        s0 = summary(base)
        s1 = summary(a * base + b)
        assert s1.skewness == pytest.approx(s0.skewness, abs=1e-6)
        assert s1.excess_kurtosis == pytest.approx(s0.excess_kurtosis, abs=1e-6)


class TestAcf:
    def test_band_at_375(self):
        x = np.random.default_rng(2).standard_normal(375)
        assert acf(x, 20).band == pytest.approx(0.1012, abs=1e-4)

    def test_matches_statsmodels(self):
        x = np.random.default_rng(3).standard_normal(500)
        ours = acf(x, 20)
        theirs = sm_acf(x, nlags=20, fft=False, adjusted=False)
        assert np.allclose(ours.rho, theirs[1:], atol=1e-10)

    def test_white_noise_outside_count(self):
        x = np.random.default_rng(5).standard_normal(375)
        assert acf(x, 20).n_outside <= 4

    def test_ar1_closed_form(self):
        rng = np.random.default_rng(17)
        x = lfilter([1.0], [1.0, -0.5], rng.standard_normal(100_000))
        res = acf(x, 5)
        for k in range(1, 6):
            assert abs(res.rho[k - 1] - 0.5**k) < 0.02

    def test_square_transform_detects_vol_clustering(self):
        # product of a slow AR(1) scale and white noise: returns uncorrelated,
        # squares strongly correlated
        rng = np.random.default_rng(11)
        scale = np.exp(lfilter([1.0], [1.0, -0.98], 0.2 * rng.standard_normal(20_000)))
        x = scale * rng.standard_normal(20_000)
        plain = acf(x, 10)
        squared = acf(x, 10, transform="square")
        assert squared.rho[0] > plain.rho[0] + 0.2

    def test_rho_bounded(self, rng):
        for _ in range(20):
            x = rng.standard_normal(80)
            assert np.all(np.abs(acf(x, 20).rho) <= 1.0)

    def test_constant_series_rejected(self):
        with pytest.raises(DegenerateSeriesError):
            acf([1.0] * 50, 5)
        with pytest.raises(DegenerateSeriesError):
            acf([-1.0, 1.0] * 25, 5, transform="square")

    def test_lag_validation(self):
        with pytest.raises(InvalidParameterError):
            acf([1.0, 2.0, 3.0], 3)
        with pytest.raises(InvalidParameterError):
            acf([1.0, 2.0, 3.0], 0)

    def test_unknown_transform(self):
        with pytest.raises(InvalidParameterError):
            acf([1.0, 2.0, 3.0], 1, transform="cube")


class TestEmpiricalQuantile:
    def test_single_element(self):
        for alpha in (0.01, 0.5, 0.99):
            assert empirical_quantile([42.0], alpha) == 42.0

    def test_interpolated_median_of_1_to_100(self):
        xs = list(range(1, 101))
        assert empirical_quantile(xs, 0.5) == 50.5

    def test_alpha_domain(self):
        with pytest.raises(InvalidParameterError):
            empirical_quantile([1.0], 0.0)
        with pytest.raises(InvalidParameterError):
            empirical_quantile([1.0], 1.0)

    def test_empty_series(self):
        with pytest.raises(InsufficientDataError):
            empirical_quantile([], 0.5)

    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(st.floats(min_value=-1000, max_value=1000), min_size=1, max_size=60),
        st.floats(min_value=0.01, max_value=0.99),
        st.floats(min_value=0.01, max_value=0.99),
    )
    def test_monotone_in_alpha(self, xs, a1, a2):
        lo, hi = sorted((a1, a2))
        assert empirical_quantile(xs, lo) <= empirical_quantile(xs, hi)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(min_value=-100, max_value=100), min_size=2, max_size=40),
        st.floats(min_value=0.05, max_value=0.95),
        st.floats(min_value=0.1, max_value=10),
        st.floats(min_value=-50, max_value=50),
    )
    def test_affine_equivariance(self, xs, alpha, a, b):
        q = empirical_quantile(xs, alpha)
        q2 = empirical_quantile([a * x + b for x in xs], alpha)
        assert q2 == pytest.approx(a * q + b, abs=1e-9)


class TestDistributionData:
    def test_normal_sample_qq_near_diagonal(self):
        # interior of the q-q plot; single extreme order statistics dominate
        # beyond |z| of 3 and are checked only for sign behavior elsewhere
        x = np.random.default_rng(42).standard_normal(100_000)
        dist = distribution_data(x)
        inner = np.abs(dist.qq_theoretical) <= 3.0
        dev = np.abs(dist.qq_empirical - dist.qq_theoretical)[inner]
        assert dev.max() < 0.1

    def test_location_shift_leaves_qq_unchanged(self):
        x = np.random.default_rng(8).standard_normal(500)
        d0 = distribution_data(x)
        d1 = distribution_data(x + 123.4)
        assert np.allclose(d0.qq_empirical, d1.qq_empirical, atol=1e-9)
        assert np.array_equal(d0.qq_theoretical, d1.qq_theoretical)

    def test_heavy_tails_deviate_outward(self):
        x = np.random.default_rng(9).standard_t(3, size=50_000)
        dist = distribution_data(x)
        assert dist.qq_empirical[0] < dist.qq_theoretical[0] - 0.5
        assert dist.qq_empirical[-1] > dist.qq_theoretical[-1] + 0.5

    def test_histogram_covers_data_and_counts_match(self):
        x = np.random.default_rng(10).standard_normal(1000)
        dist = distribution_data(x)
        assert dist.count.sum() == 1000
        assert dist.bin_left[0] <= x.min() and dist.bin_right[-1] >= x.max()
        assert np.all(dist.bin_right > dist.bin_left)

    def test_freedman_diaconis_width(self):
        x = np.random.default_rng(12).standard_normal(4096)
        dist = distribution_data(x)
        iqr = np.subtract(*np.percentile(x, [75, 25]))
        fd = 2 * iqr / len(x) ** (1 / 3)
        widths = dist.bin_right - dist.bin_left
        assert widths[0] == pytest.approx(fd, rel=0.15)

    def test_minimum_size(self):
        with pytest.raises(InsufficientDataError):
            distribution_data(np.arange(9.0))

    def test_degenerate(self):
        with pytest.raises(DegenerateSeriesError):
            distribution_data(np.ones(100))
