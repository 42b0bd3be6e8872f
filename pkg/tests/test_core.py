"""Model container, transition information terms, and marginal moments."""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bitbounds import (
    GaussMarkovModel,
    StateMoments,
    TransitionInfo,
    prior_bim,
    state_moments,
    stationary_variance,
    transition_info,
)


class TestGaussMarkovModel:
    def test_accepts_unit_alpha(self):
        m = GaussMarkovModel(alpha=1.0, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        assert not m.is_stationary

    def test_accepts_negative_alpha(self):
        m = GaussMarkovModel(alpha=-0.7, sigma_z=0.5, sigma_eta=1.0, sigma0=1.0)
        assert m.is_stationary

    def test_default_prior_mean_is_zero(self):
        m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        assert m.mu0 == 0.0

    @pytest.mark.parametrize("alpha", [1.0000001, -1.5, math.nan])
    def test_rejects_alpha_outside_unit_interval(self, alpha):
        with pytest.raises(ValueError):
            GaussMarkovModel(alpha=alpha, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)

    @pytest.mark.parametrize("field", ["sigma_z", "sigma_eta", "sigma0"])
    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_nonpositive_scales(self, field, bad):
        kwargs = dict(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        kwargs[field] = bad
        with pytest.raises(ValueError):
            GaussMarkovModel(**kwargs)

    def test_rejects_nonfinite_mu0(self):
        with pytest.raises(ValueError):
            GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0, mu0=math.inf)

    def test_frozen(self):
        m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        with pytest.raises(Exception):
            m.alpha = 0.9


class TestTransitionInfo:
    def test_scalar_model_blocks(self):
        m = GaussMarkovModel(alpha=0.8, sigma_z=0.5, sigma_eta=1.0, sigma0=1.0)
        info = transition_info(m)
        s = 1.0 / 0.25
        assert_allclose(info.d11, [[0.64 * s]])
        assert_allclose(info.d22, [[s]])
        assert_allclose(info.d12, [[-0.8 * s]])
        assert_allclose(info.d21, [[-0.8 * s]])
        assert info.dim == 1

    def test_stacked_block_is_rank_one(self):
        m = GaussMarkovModel(alpha=0.8, sigma_z=0.5, sigma_eta=1.0, sigma0=1.0)
        info = transition_info(m)
        stacked = np.block([[info.d11, info.d12], [info.d21, info.d22]])
        assert_allclose(np.linalg.det(stacked), 0.0, atol=1e-12)
        assert np.linalg.matrix_rank(stacked) == 1

    def test_rejects_mismatched_cross_blocks(self):
        with pytest.raises(ValueError):
            TransitionInfo(d11=[[1.0]], d12=[[2.0]], d21=[[3.0]], d22=[[1.0]])

    def test_coerces_scalars_to_matrices(self):
        info = TransitionInfo(d11=[[1.0]], d12=[[-0.5]], d21=[[-0.5]], d22=[[1.0]])
        assert info.d11.shape == (1, 1)


class TestStateMoments:
    def test_rejects_negative_index(self):
        with pytest.raises(ValueError):
            StateMoments(block_index=-1, mean=0.0, variance=1.0)

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ValueError):
            StateMoments(block_index=0, mean=0.0, variance=0.0)


class TestMarginalMoments:
    def test_block_zero_is_prior(self):
        m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=2.0, mu0=3.0)
        mom = state_moments(m, 0)
        assert mom.mean == 3.0
        assert mom.variance == 4.0

    def test_one_step_recursion(self):
        m = GaussMarkovModel(alpha=0.8, sigma_z=0.5, sigma_eta=1.0, sigma0=1.5, mu0=-2.0)
        for k in range(1, 12):
            prev = state_moments(m, k - 1)
            cur = state_moments(m, k)
            assert_allclose(cur.mean, m.alpha * prev.mean, rtol=1e-12)
            assert_allclose(cur.variance, m.alpha**2 * prev.variance + m.sigma_z**2,
                            rtol=1e-12)

    def test_unit_alpha_grows_linearly(self):
        m = GaussMarkovModel(alpha=1.0, sigma_z=0.3, sigma_eta=1.0, sigma0=2.0)
        assert_allclose(state_moments(m, 50).variance, 4.0 + 50 * 0.09, rtol=1e-14)

    def test_negative_unit_alpha_grows_linearly(self):
        m = GaussMarkovModel(alpha=-1.0, sigma_z=0.3, sigma_eta=1.0, sigma0=2.0, mu0=1.0)
        mom = state_moments(m, 3)
        assert_allclose(mom.variance, 4.0 + 3 * 0.09, rtol=1e-14)
        assert mom.mean == -1.0

    def test_zero_alpha_forgets_prior(self):
        m = GaussMarkovModel(alpha=0.0, sigma_z=0.7, sigma_eta=1.0, sigma0=5.0, mu0=4.0)
        mom = state_moments(m, 1)
        assert mom.mean == 0.0
        assert_allclose(mom.variance, 0.49, rtol=1e-15)

    def test_large_index_reaches_stationary_variance(self):
        m = GaussMarkovModel(alpha=0.99, sigma_z=0.2, sigma_eta=1.0, sigma0=0.1)
        target = stationary_variance(m)
        assert_allclose(state_moments(m, 5000).variance, target, rtol=1e-12)

    def test_huge_index_underflows_cleanly(self):
        m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0, mu0=1.0)
        mom = state_moments(m, 10**6)
        assert mom.mean == 0.0
        assert_allclose(mom.variance, stationary_variance(m), rtol=1e-15)

    def test_rejects_negative_k(self):
        m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        with pytest.raises(ValueError):
            state_moments(m, -1)


class TestStationaryVariance:
    def test_closed_form(self):
        m = GaussMarkovModel(alpha=0.9, sigma_z=0.5, sigma_eta=1.0, sigma0=1.0)
        assert_allclose(stationary_variance(m), 0.25 / 0.19, rtol=1e-15)

    def test_rejects_unit_alpha(self):
        m = GaussMarkovModel(alpha=1.0, sigma_z=1.0, sigma_eta=1.0, sigma0=1.0)
        with pytest.raises(ValueError):
            stationary_variance(m)


def test_prior_bim_inverts_prior_variance():
    m = GaussMarkovModel(alpha=0.5, sigma_z=1.0, sigma_eta=1.0, sigma0=0.25)
    assert_allclose(prior_bim(m), [[16.0]], rtol=1e-15)
