"""Steady-state fixed points and quantization performance ratios.

Ratio oracles were computed independently with 50-digit arithmetic from
the closed-form quadratic roots and adaptive quadrature of the one-bit
information against the stationary marginal.
"""
import math

import pytest
from numpy.testing import assert_allclose

from bitbounds import (
    ConvergenceError,
    GaussMarkovModel,
    MeasurementChannel,
    model_for_snr,
    performance_ratios,
    quadratic_filter_root,
    quadratic_gain_root,
    snr_to_sigma_z,
    steady_expected_fim,
    steady_filter_bim,
    steady_lag_gain,
    steady_smoothing_gain,
)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

# alpha = 1 - 1e-5, sigma_eta = 1: snr_db -> (rho_sl_db, rho_f_db, rho_s_db)
RATIO_TABLE = {
    -40.0: (-0.922437853345, -0.742157151167, 1.23053272635),
    -30.0: (-0.975224285221, -0.903836126643, 1.73878189645),
    -20.0: (-0.987842193091, -0.963852809404, 1.9254903474),
    -15.0: (-1.00512669386, -0.991462682983, 1.94920324445),
    0.0: (-1.59135541008, -1.59004297431, 1.39956565562),
    10.0: (-3.33705979515, -3.34989487768, -0.360408562221),
}

# snr_db = -30: rho_s_db strictly increases with alpha
RHO_S_BY_ALPHA = {
    0.9: 0.00346972622169,
    0.999: 0.426457794159,
    0.99999: 1.73878189645,
}


def _golden_model() -> GaussMarkovModel:
    return GaussMarkovModel(alpha=1.0, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)


class TestQuadraticRoots:
    def test_golden_ratio_pair(self):
        m = _golden_model()
        f = steady_expected_fim(m, MeasurementChannel.UNQUANTIZED)
        assert_allclose(quadratic_filter_root(m, f), GOLDEN, rtol=1e-15)
        assert_allclose(quadratic_gain_root(m, f), GOLDEN - 1.0, rtol=1e-15)

    def test_roots_satisfy_their_quadratics(self):
        m = GaussMarkovModel(alpha=0.93, sigma_z=0.4, sigma_eta=1.7, sigma0=1.0)
        f = steady_expected_fim(m, MeasurementChannel.ONE_BIT)
        s = 1.0 / m.sigma_z**2
        b = (1.0 - m.alpha**2) * s + f
        c = m.alpha**2 * s * f
        j = quadratic_filter_root(m, f)
        kappa = quadratic_gain_root(m, f)
        assert_allclose(j * j - b * j - c, 0.0, atol=1e-9 * j * j)
        assert_allclose(kappa * kappa + b * kappa - c, 0.0, atol=1e-9 * c)

    def test_sum_identity(self):
        # j + kappa = sqrt(b^2 + 4c), the long-lag smoothing information
        m = GaussMarkovModel(alpha=0.999, sigma_z=0.05, sigma_eta=1.0, sigma0=1.0)
        f = steady_expected_fim(m, MeasurementChannel.UNQUANTIZED)
        s = 1.0 / m.sigma_z**2
        b = (1.0 - m.alpha**2) * s + f
        c = m.alpha**2 * s * f
        j = quadratic_filter_root(m, f)
        kappa = quadratic_gain_root(m, f)
        assert_allclose(j + kappa, math.sqrt(b * b + 4.0 * c), rtol=1e-14)


class TestFixedPointSolvers:
    def test_filter_iteration_reaches_golden_ratio(self):
        res = steady_filter_bim(_golden_model(), MeasurementChannel.UNQUANTIZED)
        assert res.converged
        assert_allclose(res.value, GOLDEN, rtol=1e-11)

    def test_gain_iteration_reaches_golden_ratio_conjugate(self):
        res = steady_smoothing_gain(_golden_model(), MeasurementChannel.UNQUANTIZED)
        assert res.converged
        assert_allclose(res.value, GOLDEN - 1.0, rtol=1e-11)

    def test_iterate_agrees_with_root_in_the_stiff_corner(self):
        # alpha -> 1 at very low SNR contracts at 1 - O(1e-4) per step; the
        # solver must still land within 1e-10 of the closed form.
        m = model_for_snr(1.0 - 1e-5, -40.0)
        f = steady_expected_fim(m, MeasurementChannel.UNQUANTIZED)
        res = steady_filter_bim(m, MeasurementChannel.UNQUANTIZED)
        assert_allclose(res.value, quadratic_filter_root(m, f), rtol=1e-10)
        assert res.iterations < 1_000_000

    def test_one_bit_requires_stationary_model(self):
        with pytest.raises(ValueError):
            steady_filter_bim(_golden_model(), MeasurementChannel.ONE_BIT)

    def test_iteration_cap_raises_with_last_iterates(self):
        m = model_for_snr(0.999, -10.0)
        with pytest.raises(ConvergenceError) as excinfo:
            steady_filter_bim(m, MeasurementChannel.UNQUANTIZED, max_iterations=3)
        last = excinfo.value.last_iterates
        assert len(last) == 2
        assert all(math.isfinite(v) for v in last)

    def test_zero_alpha_converges_immediately(self):
        m = GaussMarkovModel(alpha=0.0, sigma_z=0.5, sigma_eta=1.0, sigma0=1.0)
        res = steady_filter_bim(m, MeasurementChannel.UNQUANTIZED)
        assert_allclose(res.value, 4.0 + 1.0, rtol=1e-14)
        assert steady_smoothing_gain(m, MeasurementChannel.UNQUANTIZED).value == 0.0


class TestLagGain:
    def test_zero_lag_is_zero(self):
        m = model_for_snr(0.999, -10.0)
        assert steady_lag_gain(m, MeasurementChannel.UNQUANTIZED, 0) == 0.0

    def test_single_lag_closed_form(self):
        m = model_for_snr(0.999, -10.0)
        f = steady_expected_fim(m, MeasurementChannel.UNQUANTIZED)
        s = 1.0 / m.sigma_z**2
        a2s = m.alpha**2 * s
        assert_allclose(steady_lag_gain(m, MeasurementChannel.UNQUANTIZED, 1),
                        a2s * f / (s + f), rtol=1e-14)

    def test_monotone_toward_fixed_point(self):
        m = model_for_snr(0.999, -10.0)
        kappa = steady_smoothing_gain(m, MeasurementChannel.ONE_BIT).value
        gains = [steady_lag_gain(m, MeasurementChannel.ONE_BIT, lag)
                 for lag in (0, 1, 2, 5, 20, 100, 1000)]
        assert all(a < b for a, b in zip(gains, gains[1:]))
        assert gains[-1] < kappa
        assert_allclose(gains[-1], kappa, rtol=1e-9)

    def test_rejects_negative_lag(self):
        m = model_for_snr(0.999, -10.0)
        with pytest.raises(ValueError):
            steady_lag_gain(m, MeasurementChannel.UNQUANTIZED, -1)


class TestPerformanceRatios:
    @pytest.mark.parametrize("snr_db,expected", sorted(RATIO_TABLE.items()))
    def test_frozen_ratio_oracles(self, snr_db, expected):
        report = performance_ratios(model_for_snr(1.0 - 1e-5, snr_db))
        assert_allclose(
            [report.rho_sl_db, report.rho_f_db, report.rho_s_db], expected, atol=1e-9
        )

    def test_report_invariants(self):
        report = performance_ratios(model_for_snr(0.999, -5.0))
        assert report.rho_f_db <= 0.0
        assert report.rho_sl_db <= 0.0
        assert report.snr_db == pytest.approx(-5.0, abs=1e-9)
        assert_allclose(report.j_smooth_unq, report.j_filter_unq + report.kappa_unq,
                        rtol=1e-12)
        assert_allclose(report.j_smooth_q, report.j_filter_q + report.kappa_q,
                        rtol=1e-12)
        assert all(report.converged)
        assert len(report.iterations_used) == 4

    def test_smoothing_advantage_grows_with_alpha(self):
        values = [performance_ratios(model_for_snr(a, -30.0)).rho_s_db
                  for a in sorted(RHO_S_BY_ALPHA)]
        assert values[0] < values[1] < values[2]
        for got, (alpha, expected) in zip(values, sorted(RHO_S_BY_ALPHA.items())):
            assert_allclose(got, expected, atol=1e-9)

    def test_requires_stationary_model(self):
        with pytest.raises(ValueError):
            performance_ratios(_golden_model())

    def test_near_unit_alpha_low_snr_approaches_asymptote(self):
        # Closed forms only: the plain iteration would exceed its cap here.
        m = model_for_snr(1.0 - 1e-9, -40.0)
        f_unq = steady_expected_fim(m, MeasurementChannel.UNQUANTIZED)
        f_q = steady_expected_fim(m, MeasurementChannel.ONE_BIT)
        j_unq = quadratic_filter_root(m, f_unq)
        j_q = quadratic_filter_root(m, f_q)
        k_unq = quadratic_gain_root(m, f_unq)
        k_q = quadratic_gain_root(m, f_q)
        rho_sl = 10.0 * math.log10((j_q + k_q) / (j_unq + k_unq))
        rho_f = 10.0 * math.log10(j_q / j_unq)
        rho_s = 10.0 * math.log10((j_q + k_q) / j_unq)
        assert_allclose(rho_sl, -0.980672091998, atol=1e-6)
        assert_allclose(rho_f, -0.978218308974, atol=1e-6)
        assert_allclose(rho_s, 2.01992664129, atol=1e-6)


class TestSnrParameterization:
    def test_round_trip(self):
        for alpha, snr_db, sigma_eta in ((0.9, -17.0, 2.0), (0.999, 3.0, 0.5)):
            sigma_z = snr_to_sigma_z(alpha, snr_db, sigma_eta)
            var = sigma_z**2 / (1.0 - alpha**2)
            assert_allclose(10.0 * math.log10(var / sigma_eta**2), snr_db, atol=1e-12)

    def test_model_for_snr_is_stationary_from_block_zero(self):
        m = model_for_snr(0.99, -10.0)
        assert m.is_stationary
        assert m.mu0 == 0.0
        assert_allclose(m.sigma0**2, m.sigma_z**2 / (1.0 - m.alpha**2), rtol=1e-12)

    def test_rejects_nonstationary_alpha(self):
        with pytest.raises(ValueError):
            snr_to_sigma_z(1.0, -10.0)
