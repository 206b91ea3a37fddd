"""Exponential-family potential, densities, cumulants and duality.

Frozen oracles (exact two-outcome sums for the binary family X = (0, 1)):

    potential(0)   = log 2
    potential(1)   = log(1 + e^{-1})
    density(0)     = (1/2, 1/2), centered statistic values -+ 1/2
    order 2 at 0:  E[xi^2]            = 1/4
    order 3 at 0:  -E[xi^3]           = 0       (symmetric weights)
    order 4 at 0:  E[xi^4] - 3E[xi^2]^2 = 1/16 - 3/16 = -1/8
    eta(0)         = -E[X] = -1/2
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsym import (
    DegenerateMetric,
    DimensionMismatch,
    ExponentialFamily,
    cumulant_tensor,
    dual_coordinates,
    gibbs_density,
    natural_from_dual,
    pairing,
    potential_eval,
)
from frobsym.numdiff import derivative_tensor
from frobsym.registry import bernoulli_family, categorical_family

FD_STEPS = {1: 1e-5, 2: 1e-4, 3: 5e-3, 4: 1e-2}


def fd_cumulant(fam, beta, order):
    """Independent oracle: composed 4th-order central differences of the
    potential itself."""
    return derivative_tensor(lambda b: potential_eval(fam, b),
                             np.asarray(beta, dtype=float), order, FD_STEPS[order])


def random_family(rng, m=6, n=3):
    return ExponentialFamily(rng.normal(size=(n, m)),
                             rng.uniform(0.5, 2.0, size=m))


class TestPotential:
    def test_binary_at_zero(self):
        assert potential_eval(bernoulli_family(), [0.0]) == pytest.approx(np.log(2))

    def test_binary_at_one(self):
        expected = np.log(1 + np.exp(-1.0))
        assert potential_eval(bernoulli_family(), [1.0]) == pytest.approx(expected, rel=1e-14)

    def test_weight_scaling_shifts_by_log_c(self):
        fam = bernoulli_family()
        scaled = ExponentialFamily(fam.X, 3.0 * fam.mu0)
        beta = [0.37]
        assert potential_eval(scaled, beta) == pytest.approx(
            potential_eval(fam, beta) + np.log(3.0), rel=1e-14)

    @pytest.mark.parametrize("beta", [-50.0, 50.0])
    def test_extreme_parameters_stay_finite(self, beta):
        assert np.isfinite(potential_eval(bernoulli_family(), [beta]))


class TestPairing:
    def test_indicator(self):
        assert pairing([1.0, 0.0], [3.0, 7.0]) == 3.0

    def test_normalized_constant(self):
        assert pairing(np.full(4, 0.25), np.full(4, 5.0)) == pytest.approx(5.0)

    def test_hand_sum(self):
        assert pairing([0.2, 0.8], [1.0, 2.0]) == pytest.approx(1.8)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pairing([1.0], [1.0, 2.0])


class TestGibbsDensity:
    def test_symmetric_at_zero(self):
        assert gibbs_density(bernoulli_family(), [0.0]) == pytest.approx([0.5, 0.5])

    def test_saturates_in_steep_direction(self):
        p = gibbs_density(bernoulli_family(), [50.0])
        assert abs(p[0] - 1.0) < 1e-20
        assert p[1] < 1e-20

    def test_uniform_categorical(self):
        p = gibbs_density(categorical_family(3), [0.0, 0.0])
        assert p == pytest.approx([1 / 3] * 3)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_normalization_randomized(self, seed):
        rng = np.random.default_rng(seed)
        fam = random_family(rng, m=int(rng.integers(2, 64)), n=int(rng.integers(1, 6)))
        beta = rng.normal(0.0, 2.0, fam.n)
        assert abs(float(np.sum(gibbs_density(fam, beta))) - 1.0) <= 1e-14


class TestCumulants:
    def test_binary_frozen_values(self):
        fam = bernoulli_family()
        assert cumulant_tensor(fam, [0.0], 2).values.item() == pytest.approx(0.25)
        assert cumulant_tensor(fam, [0.0], 3).values.item() == pytest.approx(0.0, abs=1e-15)
        assert cumulant_tensor(fam, [0.0], 4).values.item() == pytest.approx(-0.125)

    def test_binary_order4_against_fd_oracle(self):
        fd = fd_cumulant(bernoulli_family(), [0.0], 4)
        assert fd.item() == pytest.approx(-0.125, rel=1e-4)

    @pytest.mark.parametrize("order, rtol", [(1, 1e-6), (2, 1e-6), (3, 1e-6), (4, 1e-4)])
    def test_matches_fd_oracle_random_family(self, order, rtol):
        rng = np.random.default_rng(41 + order)
        fam = random_family(rng, m=8, n=2)
        beta = rng.normal(0.0, 0.5, 2)
        analytic = cumulant_tensor(fam, beta, order).values
        fd = fd_cumulant(fam, beta, order)
        scale = max(1.0, float(np.max(np.abs(analytic))))
        assert np.max(np.abs(analytic - fd)) <= rtol * scale

    def test_symmetry_is_exact(self):
        rng = np.random.default_rng(7)
        fam = random_family(rng)
        t = cumulant_tensor(fam, rng.normal(size=3), 3).values
        for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]:
            assert np.array_equal(t, np.transpose(t, perm))

    def test_covariance_positive_semidefinite(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            fam = random_family(rng)
            g = cumulant_tensor(fam, rng.normal(size=3), 2).values
            assert np.min(np.linalg.eigvalsh(g)) >= -1e-12

    def test_affinely_dependent_statistics_degenerate(self):
        # second row is constant, so the covariance has a null direction
        fam = ExponentialFamily(np.array([[0.0, 1.0, 2.0], [1.0, 1.0, 1.0]]))
        g = cumulant_tensor(fam, [0.1, 0.2], 2).values
        assert np.min(np.abs(np.linalg.eigvalsh(g))) <= 1e-14

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_statistic_shift_invariance(self, seed):
        """X_j -> X_j + c shifts the potential by -c beta^j and leaves
        every cumulant of order >= 2 unchanged."""
        rng = np.random.default_rng(seed)
        fam = random_family(rng, m=5, n=2)
        c = float(rng.normal(0.0, 2.0))
        shifted_X = fam.X.copy()
        shifted_X[0] += c
        shifted = ExponentialFamily(shifted_X, fam.mu0)
        beta = rng.normal(0.0, 1.0, 2)
        assert potential_eval(shifted, beta) == pytest.approx(
            potential_eval(fam, beta) - c * beta[0], rel=1e-10, abs=1e-10)
        for order in (2, 3, 4):
            a = cumulant_tensor(fam, beta, order).values
            b = cumulant_tensor(shifted, beta, order).values
            assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(a)))


class TestDualCoordinates:
    def test_binary_at_zero(self):
        eta, psi = dual_coordinates(bernoulli_family(), [0.0])
        assert eta == pytest.approx([-0.5])
        assert psi == pytest.approx(-np.log(2))

    def test_legendre_identity_random(self):
        rng = np.random.default_rng(5)
        fam = random_family(rng)
        for _ in range(5):
            beta = rng.normal(0.0, 1.0, fam.n)
            eta, psi = dual_coordinates(fam, beta)
            assert psi + potential_eval(fam, beta) - float(beta @ eta) == pytest.approx(0.0, abs=1e-12)

    def test_jacobian_of_eta_is_the_metric(self):
        fam = bernoulli_family()
        beta = np.array([1.0])
        jac = derivative_tensor(lambda b: dual_coordinates(fam, b)[0][0], beta, 1, 1e-5)
        g = cumulant_tensor(fam, beta, 2).values
        assert jac == pytest.approx(g[0], rel=1e-6)

    def test_double_legendre_roundtrip(self):
        rng = np.random.default_rng(19)
        fam = random_family(rng)
        beta = rng.normal(0.0, 0.8, fam.n)
        eta, _ = dual_coordinates(fam, beta)
        back = natural_from_dual(fam, eta, initial=beta + rng.normal(0.0, 0.5, fam.n))
        assert np.max(np.abs(back - beta)) <= 1e-8

    def test_degenerate_metric_raises(self):
        fam = ExponentialFamily(np.array([[1.0, 1.0]]))  # constant statistic
        with pytest.raises(DegenerateMetric):
            dual_coordinates(fam, [0.0])
