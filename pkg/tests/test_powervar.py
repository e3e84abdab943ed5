import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpvol.errors import InvalidParameterError, MisalignedDaysError
from rpvol.powervar import (
    NormalAbsMoment,
    PowerVariationSpec,
    normal_abs_moment,
    normalized_rpv,
    realized_power_variation,
    standardize,
    volatility_proxy,
)
from rpvol.returns import DailyReturns, daily_return

from conftest import intra_from_rows

POWERS = (0.5, 0.75, 1.0, 1.25, 1.5)


class TestRealizedPowerVariation:
    def test_squared_sum(self):
        intra = intra_from_rows([[3.0, -4.0]])
        assert realized_power_variation(intra, 2.0)[0] == 25.0

    def test_absolute_sum(self):
        intra = intra_from_rows([[3.0, -4.0]])
        assert realized_power_variation(intra, 1.0)[0] == 7.0

    def test_zero_day(self):
        intra = intra_from_rows([[0.0, 0.0, 0.0]])
        for p in POWERS:
            assert realized_power_variation(intra, p)[0] == 0.0

    def test_invalid_exponent(self):
        intra = intra_from_rows([[1.0]])
        with pytest.raises(InvalidParameterError):
            realized_power_variation(intra, 0.0)
        with pytest.raises(InvalidParameterError):
            realized_power_variation(intra, -1.0)

    def test_monotone_in_single_return_magnitude(self, rng):
        row = rng.standard_normal(20)
        intra = intra_from_rows([row])
        for p in POWERS:
            base = realized_power_variation(intra, p)[0]
            bumped = row.copy()
            bumped[7] = bumped[7] * 2 + 1
            assert realized_power_variation(intra_from_rows([bumped]), p)[0] > base


class TestVolatilityProxy:
    def test_single_interval_sqrt(self):
        intra = intra_from_rows([[2.0]])
        vol = volatility_proxy(intra, PowerVariationSpec("absolute", 0.5))
        assert vol.sigma[0] == math.sqrt(2.0)

    @pytest.mark.parametrize("c", POWERS)
    def test_base_equivalence_bitwise(self, c, rng):
        intra = intra_from_rows(rng.standard_normal((8, 30)))
        via_abs = volatility_proxy(intra, PowerVariationSpec("absolute", c))
        via_sq = volatility_proxy(intra, PowerVariationSpec("squared", c / 2))
        assert np.array_equal(via_abs.sigma, via_sq.sigma)

    def test_intervals_mismatch_rejected(self):
        intra = intra_from_rows([[1.0, 2.0]])
        with pytest.raises(InvalidParameterError):
            volatility_proxy(intra, PowerVariationSpec("absolute", 1.0, intervals_m=5))

    def test_spec_validation(self):
        with pytest.raises(InvalidParameterError):
            PowerVariationSpec("cubed", 1.0)
        with pytest.raises(InvalidParameterError):
            PowerVariationSpec("absolute", -1.0)
        with pytest.raises(InvalidParameterError):
            PowerVariationSpec("absolute", 0.25, normalized=True)  # p = 0.25 < 0.5
        with pytest.raises(InvalidParameterError):
            PowerVariationSpec("squared", 1.5, normalized=True)  # p = 3 out of range
        # boundary p = 0.5 allowed
        PowerVariationSpec("absolute", 0.5, normalized=True)


class TestNormalAbsMoment:
    def test_mu1(self):
        assert abs(normal_abs_moment(1.0) - math.sqrt(2.0 / math.pi)) < 1e-12

    def test_mu2(self):
        assert abs(normal_abs_moment(2.0) - 1.0) < 1e-12

    def test_dataclass_fields(self):
        m = NormalAbsMoment.for_power(1.5)
        assert m.p == 1.5 and m.mu_p > 0

    def test_against_quadrature(self):
        # independent oracle: Gauss-Hermite style numeric expectation
        from numpy.polynomial.hermite_e import hermegauss

        nodes, weights = hermegauss(200)
        for p in (0.5, 0.75, 1.0, 1.7, 2.0, 2.5):
            numeric = float(np.sum(weights * np.abs(nodes) ** p) / math.sqrt(2 * math.pi))
            assert normal_abs_moment(p) == pytest.approx(numeric, rel=1e-9)


class TestNormalizedRpv:
    def test_p2_equals_plain_sum_exactly(self, rng):
        intra = intra_from_rows(rng.standard_normal((5, 107)))
        assert np.array_equal(normalized_rpv(intra, 2.0), realized_power_variation(intra, 2.0))

    def test_range_validation(self):
        intra = intra_from_rows([[1.0, 2.0]])
        with pytest.raises(InvalidParameterError):
            normalized_rpv(intra, 0.4)
        with pytest.raises(InvalidParameterError):
            normalized_rpv(intra, 3.0)

    def test_explicit_m_must_match(self):
        intra = intra_from_rows([[1.0, 2.0]])
        with pytest.raises(InvalidParameterError):
            normalized_rpv(intra, 1.0, m=5)

    def test_factor_against_hand_formula(self):
        intra = intra_from_rows([[1.0, -2.0, 0.5]])
        p = 1.0
        expected = 3 ** (-0.5) / math.sqrt(2 / math.pi) * (1 + 2 + 0.5)
        assert normalized_rpv(intra, p)[0] == pytest.approx(expected, rel=1e-12)


class TestStandardize:
    def test_triangle_bound_and_equality_condition(self, rng):
        intra = intra_from_rows(rng.standard_normal((50, 25)))
        daily = daily_return(intra)
        vol = volatility_proxy(intra, PowerVariationSpec("absolute", 1.0))
        z = standardize(daily, vol)
        assert np.all(np.abs(z.z) <= 1.0)
        # single-signed day attains the bound exactly
        onesign = intra_from_rows([np.abs(rng.standard_normal(25)) + 0.01])
        z1 = standardize(daily_return(onesign),
                         volatility_proxy(onesign, PowerVariationSpec("absolute", 1.0)))
        assert z1.z[0] == 1.0

    def test_zero_return_gives_zero_z(self):
        intra = intra_from_rows([[1.0, -1.0]])
        daily = daily_return(intra)
        vol = volatility_proxy(intra, PowerVariationSpec("absolute", 1.0))
        z = standardize(daily, vol)
        assert z.z[0] == 0.0

    def test_zero_sigma_days_excluded_and_reported(self):
        intra = intra_from_rows([[0.0, 0.0], [1.0, -0.5]])
        daily = daily_return(intra)
        vol = volatility_proxy(intra, PowerVariationSpec("absolute", 1.0))
        z = standardize(daily, vol)
        assert len(z.z) == 1
        assert z.excluded_days == (intra.days[0],)
        assert z.days == (intra.days[1],)

    def test_misaligned_days_fatal(self):
        intra = intra_from_rows([[1.0, 2.0]])
        daily = daily_return(intra)
        vol = volatility_proxy(intra, PowerVariationSpec("absolute", 1.0))
        shifted = DailyReturns((intra.days[0].replace(day=9),), daily.r)
        with pytest.raises(MisalignedDaysError):
            standardize(shifted, vol)

    @pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
    def test_rescaling_data_scales_z_by_k_pow_1_minus_p(self, p, rng):
        # direct recomputation oracle at k = 2
        k = 2.0
        rows = rng.standard_normal((6, 30))
        intra = intra_from_rows(rows)
        scaled = intra_from_rows(k * rows)
        spec = PowerVariationSpec("absolute", p)
        z_base = standardize(daily_return(intra), volatility_proxy(intra, spec))
        z_scaled = standardize(daily_return(scaled), volatility_proxy(scaled, spec))
        assert np.allclose(z_scaled.z, k ** (1.0 - p) * z_base.z, rtol=1e-12)
        if p == 1.0:
            assert np.allclose(z_scaled.z, z_base.z, rtol=1e-12)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=40),
    st.sampled_from(POWERS),
)
def test_base_equivalence_property(row, c):
    intra = intra_from_rows([row])
    via_abs = volatility_proxy(intra, PowerVariationSpec("absolute", c))
    via_sq = volatility_proxy(intra, PowerVariationSpec("squared", c / 2))
    assert np.array_equal(via_abs.sigma, via_sq.sigma)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=40))
def test_sigma_zero_iff_all_returns_zero(row):
    intra = intra_from_rows([row])
    vol = volatility_proxy(intra, PowerVariationSpec("absolute", 1.0))
    assert (vol.sigma[0] == 0.0) == all(r == 0.0 for r in row)
