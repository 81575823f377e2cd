import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from argp import DomainError, GpdParams, cdf, f_gpd, f_iterate, f_star, f_star_inv, quantile

BENCHMARK = dict(xi=0.5538, sigma=11488.0, beta=0.8619)


def f_closed_form(x, xi, sigma, beta):
    """Closed-form transition map for the GPD marginal (test oracle)."""
    x = np.asarray(x, dtype=float)
    if abs(xi) < 1e-8:
        return -sigma * np.log(beta * np.exp(-x / sigma)
                               / (1.0 - (1.0 - beta) * np.exp(-x / sigma)))
    t = np.expm1(np.log1p(xi * x / sigma) / xi)
    return sigma / xi * np.expm1(xi * np.log1p(t / beta))


class TestFStar:
    def test_identity_at_beta_one(self):
        assert f_star(1.0, 0.37) == 0.37

    def test_hand_value(self):
        assert f_star(0.5, 0.5) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_fixed_endpoints(self):
        for beta in [0.1, 0.5, 0.9, 1.0]:
            assert f_star(beta, 0.0) == 0.0
            assert f_star(beta, 1.0) == 1.0

    def test_beta_zero_limit_convention(self):
        assert f_star(0.0, 0.0) == 0.0
        assert f_star(0.0, 0.3) == 1.0
        assert f_star(0.0, 1.0) == 1.0

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            f_star(1.2, 0.5)
        with pytest.raises(DomainError):
            f_star(0.5, -0.01)
        with pytest.raises(DomainError):
            f_star(0.5, 1.01)


class TestFStarInv:
    def test_identity_at_beta_one(self):
        assert f_star_inv(1.0, 0.37) == 0.37

    def test_inverts_hand_value(self):
        assert f_star_inv(0.5, 2.0 / 3.0) == pytest.approx(0.5, rel=1e-14)

    def test_fixed_endpoint(self):
        assert f_star_inv(0.3, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_beta_zero_rejected(self):
        with pytest.raises(DomainError):
            f_star_inv(0.0, 0.5)

    @pytest.mark.parametrize("beta", [0.01, 0.1, 0.5, 0.9, 1.0])
    def test_roundtrip_both_directions(self, beta):
        us = np.linspace(0.0, 1.0, 101)
        assert_allclose(f_star_inv(beta, f_star(beta, us)), us, atol=1e-12)
        assert_allclose(f_star(beta, f_star_inv(beta, us)), us, atol=1e-12)


@settings(max_examples=300, deadline=None)
@given(
    beta=st.floats(1e-6, 1.0, allow_subnormal=False),
    u=st.floats(0.0, 1.0, allow_subnormal=False),
    v=st.floats(0.0, 1.0, allow_subnormal=False),
)
def test_f_star_monotone_and_dominates_identity(beta, u, v):
    lo, hi = sorted((u, v))
    if lo < hi:
        assert f_star(beta, lo) < f_star(beta, hi) or (f_star(beta, lo) == f_star(beta, hi) == 1.0)
    # strict dominance away from float-resolution corners
    if beta < 1.0 - 1e-12 and 1e-300 < u < 1.0 - 1e-12:
        assert f_star(beta, u) > u


class TestFGpd:
    def test_zero_fixed(self):
        assert f_gpd(GpdParams(0.3, 2.0), 0.7, 0.0) == 0.0

    def test_matches_copula_composition(self):
        p = GpdParams(0.25, 2.0)
        xs = np.asarray(quantile(p, np.linspace(0.01, 0.99, 30)))
        composed = quantile(p, f_star(0.6, np.asarray(cdf(p, xs))))
        assert_allclose(f_gpd(p, 0.6, xs), composed, rtol=1e-10)

    @pytest.mark.parametrize("xi", [-0.4, -0.1, 0.0, 0.1, 0.3, 0.5538, 0.9])
    @pytest.mark.parametrize("beta", [0.05, 0.3, 0.8619, 1.0])
    def test_closed_form_oracle(self, xi, beta):
        sigma = 2.0
        p = GpdParams(xi, sigma)
        hi = p.support.hi
        top = hi * (1 - 1e-9) if math.isfinite(hi) else 8.0 * sigma
        xs = np.linspace(1e-6, top, 50)
        # atol floor covers pure float noise on near-zero map values
        assert_allclose(f_gpd(p, beta, xs), f_closed_form(xs, xi, sigma, beta),
                        rtol=1e-10, atol=1e-13)

    def test_benchmark_point(self):
        p = GpdParams(BENCHMARK["xi"], BENCHMARK["sigma"])
        got = f_gpd(p, BENCHMARK["beta"], 1000.0)
        want = f_closed_form(1000.0, BENCHMARK["xi"], BENCHMARK["sigma"], BENCHMARK["beta"])
        assert got == pytest.approx(float(want), rel=1e-10)

    def test_strictly_increasing(self):
        p = GpdParams(0.2, 1.0)
        xs = np.linspace(0.0, 50.0, 200)
        fx = f_gpd(p, 0.4, xs)
        assert np.all(np.diff(fx) > 0)

    def test_outside_support_rejected(self):
        with pytest.raises(DomainError):
            f_gpd(GpdParams(0.2, 1.0), 0.5, -1.0)
        p = GpdParams(-0.4, 1.0)
        with pytest.raises(DomainError):
            f_gpd(p, 0.5, p.support.hi + 0.1)

    def test_beta_zero_sends_interior_to_endpoint(self):
        assert f_gpd(GpdParams(0.2, 1.0), 0.0, 1.0) == math.inf
        p = GpdParams(-0.4, 1.0)
        assert f_gpd(p, 0.0, 1.0) == pytest.approx(p.support.hi)


class TestParetoSpecialCase:
    """Under the Pareto cdf 1 - (1 + (x/sigma)^(1/xi))^(-1), the conjugated
    transition map collapses to x -> beta^(-xi) * x."""

    @staticmethod
    def pareto_cdf(x, xi, sigma):
        return 1.0 - 1.0 / (1.0 + (x / sigma) ** (1.0 / xi))

    @staticmethod
    def pareto_quantile(u, xi, sigma):
        return sigma * (u / (1.0 - u)) ** xi

    @pytest.mark.parametrize("beta", [0.1, 0.5, 0.8619])
    def test_conjugation_is_linear(self, beta):
        xi, sigma = 0.5538, 2.0
        xs = np.linspace(0.01, 50.0, 100)
        conjugated = self.pareto_quantile(f_star(beta, self.pareto_cdf(xs, xi, sigma)), xi, sigma)
        assert_allclose(conjugated, beta**-xi * xs, rtol=1e-10)


class TestFIterate:
    def test_zero_iterations(self):
        assert f_iterate(GpdParams(0.2, 1.0), 0.5, 3.0, 0) == 3.0

    def test_identity_at_beta_one(self):
        assert f_iterate(GpdParams(0.2, 1.0), 1.0, 3.0, 5) == 3.0

    def test_two_fold_hand_iterate(self):
        # exponential marginal, start at the median: copula coordinates
        # 0.5 -> 2/3 -> 0.8, so the value is -log(1 - 0.8) = log 5
        p = GpdParams(0.0, 1.0)
        x = quantile(p, 0.5)
        got = f_iterate(p, 0.5, x, 2)
        assert got == pytest.approx(math.log(5.0), rel=1e-12)

    def test_nondecreasing_in_k(self):
        p = GpdParams(0.25, 1.0)
        vals = [f_iterate(p, 0.7, 1.0, k) for k in range(12)]
        assert np.all(np.diff(vals) > 0)

    def test_matches_repeated_f(self):
        p = GpdParams(-0.2, 1.5)
        x = 1.0
        direct = f_gpd(p, 0.6, f_gpd(p, 0.6, f_gpd(p, 0.6, x)))
        assert f_iterate(p, 0.6, x, 3) == pytest.approx(float(direct), rel=1e-12)

    def test_bad_k(self):
        with pytest.raises(DomainError):
            f_iterate(GpdParams(0.2, 1.0), 0.5, 1.0, -1)
