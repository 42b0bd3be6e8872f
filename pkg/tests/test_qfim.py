"""One-bit Fisher information and its Gaussian-marginal expectation.

Reference values were computed independently with 50-digit arithmetic:
the pointwise information from its defining tail-probability form, the
expectations by adaptive quadrature of that form against the marginal.
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bitbounds import (
    MeasurementChannel,
    QuadratureRule,
    QuadratureSpec,
    StateMoments,
    expected_fim,
    expected_fq,
    fq,
    q_function,
)

# (mean, variance, sigma_eta) -> E[F_q], 50-digit quadrature
EXPECTED_FQ_TABLE = [
    (0.0, 1e-4, 1.0, 0.63659663994203786),
    (0.0, 1e-2, 1.0, 0.63431716560999606),
    (0.0, 1.0, 1.0, 0.48053795807491033),
    (0.0, 1e2, 1.0, 0.071628316774098241),
    (0.0, 1e4, 1.0, 0.0072060315136152413),
    (0.5, 1.0, 1.0, 0.45491959847103074),
    (2.0, 0.25, 1.0, 0.15660527046398481),
    (-3.0, 9.0, 1.0, 0.14515192895639518),
    (0.0, 1.0, 2.0, 0.14623115629103295),
    (1.0, 4.0, 0.5, 0.61842677393576336),
]


class TestQFunction:
    def test_symmetry_and_anchor_values(self):
        assert q_function(0.0) == 0.5
        assert_allclose(q_function(1.0), 0.15865525393145705, rtol=1e-14)
        assert_allclose(q_function(-1.0) + q_function(1.0), 1.0, rtol=1e-14)

    def test_deep_tail_stays_positive(self):
        tail = q_function(37.0)
        assert 0.0 < tail < 1e-290

    def test_vectorized(self):
        x = np.array([-2.0, 0.0, 2.0])
        assert_allclose(q_function(x), [1 - q_function(2.0), 0.5, q_function(2.0)],
                        rtol=1e-14)


class TestPointwiseInformation:
    def test_peak_value(self):
        for sigma_eta in (0.5, 1.0, 2.0):
            assert_allclose(fq(0.0, sigma_eta), 2.0 / (math.pi * sigma_eta**2),
                            rtol=1e-14)

    def test_frozen_oracles(self):
        assert_allclose(fq(1.0, 1.0), 0.43862886110221396, rtol=1e-13)
        assert_allclose(fq(8.0, 1.0), 4.1031353272209136e-14, rtol=1e-13)
        assert_allclose(fq(37.0, 1.0), 7.8497456477810117e-297, rtol=1e-12)

    def test_even_in_theta(self):
        theta = np.linspace(0.1, 30.0, 40)
        assert_allclose(fq(theta, 1.3), fq(-theta, 1.3), rtol=1e-13)

    def test_scalar_in_scalar_out(self):
        out = fq(1.5, 1.0)
        assert isinstance(out, float)

    def test_scale_invariance(self):
        # F depends on theta only through theta / sigma_eta, up to 1/sigma_eta^2.
        theta, se = 1.7, 2.4
        assert_allclose(fq(theta, se), fq(theta / se, 1.0) / se**2, rtol=1e-13)

    def test_finite_far_into_the_tails(self):
        theta = np.array([50.0, 100.0, 200.0])
        out = fq(theta, 1.0)
        assert np.all(np.isfinite(out))
        assert np.all(out >= 0.0)


class TestQuadratureSpec:
    def test_defaults(self):
        spec = QuadratureSpec()
        assert spec.rule is QuadratureRule.GAUSS_HERMITE
        assert spec.nodes == 128
        assert spec.half_width_sigmas == 10.0

    @pytest.mark.parametrize("nodes", [8, 1024])
    def test_rejects_gauss_hermite_nodes_out_of_range(self, nodes):
        with pytest.raises(ValueError):
            QuadratureSpec(rule=QuadratureRule.GAUSS_HERMITE, nodes=nodes)

    def test_rejects_tiny_trapezoid_grid(self):
        with pytest.raises(ValueError):
            QuadratureSpec(rule=QuadratureRule.TRAPEZOID, nodes=32)

    @pytest.mark.parametrize("hw", [2.0, 20.0])
    def test_rejects_half_width_out_of_range(self, hw):
        with pytest.raises(ValueError):
            QuadratureSpec(half_width_sigmas=hw)


class TestExpectedInformation:
    @pytest.mark.parametrize("mean,variance,sigma_eta,truth", EXPECTED_FQ_TABLE)
    def test_frozen_oracles(self, mean, variance, sigma_eta, truth):
        got = expected_fq(StateMoments(0, mean, variance), sigma_eta)
        assert_allclose(got, truth, rtol=1e-12)

    def test_never_exceeds_peak(self):
        for mean, variance, sigma_eta, truth in EXPECTED_FQ_TABLE:
            assert truth < 2.0 / (math.pi * sigma_eta**2)

    def test_symmetric_in_mean(self):
        spec = QuadratureSpec()
        plus = expected_fq(StateMoments(0, 1.4, 2.0), 1.0, spec)
        minus = expected_fq(StateMoments(0, -1.4, 2.0), 1.0, spec)
        assert_allclose(plus, minus, rtol=1e-13)

    def test_concentrated_marginal_recovers_pointwise_value(self):
        got = expected_fq(StateMoments(0, 0.8, 1e-12), 1.0)
        assert_allclose(got, fq(0.8, 1.0), rtol=1e-6)

    def test_repeated_calls_are_stable(self):
        mom = StateMoments(0, 0.3, 2.5)
        assert expected_fq(mom, 1.0) == expected_fq(mom, 1.0)

    def test_unquantized_channel_is_noise_precision(self):
        mom = StateMoments(0, 0.0, 123.0)
        assert expected_fim(MeasurementChannel.UNQUANTIZED, mom, 2.0) == 0.25

    def test_one_bit_channel_dispatches_to_quadrature(self):
        mom = StateMoments(0, 0.0, 1.0)
        got = expected_fim(MeasurementChannel.ONE_BIT, mom, 1.0)
        assert_allclose(got, 0.48053795807491033, rtol=1e-12)


class TestQuadratureAgreement:
    """Gauss-Hermite default vs a brute-force trapezoid oracle."""

    TRAPEZOID = QuadratureSpec(rule=QuadratureRule.TRAPEZOID, nodes=100_000,
                               half_width_sigmas=10.0)

    @pytest.mark.parametrize("variance", [1e-4, 1e-2, 1.0, 1e2, 1e4])
    def test_rules_agree_across_variance_ratios(self, variance):
        mom = StateMoments(0, 0.0, variance)
        gh = expected_fq(mom, 1.0, QuadratureSpec())
        trap = expected_fq(mom, 1.0, self.TRAPEZOID)
        assert np.isfinite(gh) and np.isfinite(trap)
        assert_allclose(gh, trap, rtol=1e-8)

    @pytest.mark.parametrize("variance", [1e-4, 1.0, 1e4])
    def test_agreement_survives_offset_means(self, variance):
        mom = StateMoments(0, 3.0 * math.sqrt(variance), variance)
        gh = expected_fq(mom, 1.0, QuadratureSpec())
        trap = expected_fq(mom, 1.0, self.TRAPEZOID)
        assert_allclose(gh, trap, rtol=1e-7)

    def test_node_count_already_converged(self):
        # Halving the default node count must not move the result.
        mom = StateMoments(0, 0.0, 1e2)
        full = expected_fq(mom, 1.0, QuadratureSpec(nodes=128))
        half = expected_fq(mom, 1.0, QuadratureSpec(nodes=64))
        assert_allclose(full, half, rtol=1e-10)
