import json
import math

import numpy as np
import pytest

from argp import (ArgpParams, DomainError, EstimationError, FreqStats, GpdParams,
                  InsufficientDataError, MargpParams, cdf, estimate_beta0,
                  estimate_beta_argp, estimate_margp, estimate_targp,
                  fit_pipeline, frequency_stats, mle_gpd, quantile, sample,
                  scale_at_threshold, simulate_argp, simulate_margp,
                  simulate_targp, switch_estimates_from_freq, targp_params)

XI, SIGMA, BETA, GAMMA, U = 0.5538, 11488.0, 0.8619, 0.5778, 2168.0
SIGMA_U = SIGMA + XI * U          # exceedance scale at the threshold
USTAR = float(cdf(GpdParams(XI, SIGMA), U))


class TestMleGpd:
    def test_iid_recovery_calibration(self):
        # 95% of repetitions within +-0.06 of xi and +-6% of sigma
        p = GpdParams(XI, SIGMA)
        rng = np.random.default_rng(42)
        hits = 0
        reps = 40
        for _ in range(reps):
            fit, ll = mle_gpd(sample(p, rng, size=10**4))
            ok = abs(fit.xi - XI) <= 0.06 and abs(fit.sigma / SIGMA - 1.0) <= 0.06
            hits += ok
            assert math.isfinite(ll)
        assert hits >= 36

    def test_degenerate_sample(self):
        with pytest.raises(EstimationError):
            mle_gpd(np.full(100, 5.0))

    def test_nonpositive_values(self):
        with pytest.raises(DomainError):
            mle_gpd(np.array([1.0] * 50 + [-2.0]))
        with pytest.raises(DomainError):
            mle_gpd(np.array([1.0] * 50 + [0.0]))

    def test_floor(self):
        p = GpdParams(0.25, 1.0)
        with pytest.raises(InsufficientDataError):
            mle_gpd(sample(p, np.random.default_rng(0), size=29))

    def test_on_dependent_path(self):
        # ergodicity justifies the i.i.d.-style likelihood on a single path
        p = ArgpParams(GpdParams(0.25, 1.0), 0.6)
        path = simulate_argp(p, 10**5, seed=7)
        fit, _ = mle_gpd(path.values)
        assert abs(fit.xi - 0.25) < 0.05

    def test_loglik_is_attained_value(self):
        p = GpdParams(0.25, 2.0)
        x = sample(p, np.random.default_rng(3), size=2000)
        fit, ll = mle_gpd(x)
        from argp.estimate import gpd_negloglik
        assert ll == pytest.approx(-gpd_negloglik(fit.xi, fit.sigma, x), rel=1e-12)


class TestBetaArgp:
    def test_all_decreases_clips_to_zero(self):
        est, freq = estimate_beta_argp(np.array([3.0, 2.0, 1.0]))
        assert freq.p_hat == 1.0
        assert est.value == 0.0 and est.raw == -1.0 and est.clipped

    def test_no_decreases_gives_one(self):
        est, freq = estimate_beta_argp(np.array([1.0, 2.0, 3.0]))
        assert est.value == 1.0 and not est.clipped

    def test_recovery(self):
        p = ArgpParams(GpdParams(0.25, 1.0), 0.7)
        path = simulate_argp(p, 10**5, seed=11)
        est, _ = estimate_beta_argp(path)
        assert abs(est.value - 0.7) < 0.01


class TestSwitchAlgebra:
    def test_hand_case_uncensored(self):
        est = switch_estimates_from_freq(FreqStats(0.25, 0.25, 1000), u_star=0.0)
        assert est.gamma.value == pytest.approx(0.5, rel=1e-14)
        assert est.beta.value == pytest.approx(1.0, rel=1e-14)

    def test_no_fresh_increases_reduces_to_argp_formula(self):
        est = switch_estimates_from_freq(FreqStats(0.2, 0.0, 1000), u_star=0.0)
        assert est.gamma.value == 1.0
        assert est.beta.value == pytest.approx(1.0 - 2.0 * 0.2, rel=1e-14)

    def test_hand_case_censored(self):
        # u* = 0.5 -> ub2 = 0.75; p = q = 0.15 -> gamma = 0.6, beta = 1
        est = switch_estimates_from_freq(FreqStats(0.15, 0.15, 1000), u_star=0.5)
        assert est.gamma.value == pytest.approx(0.6, rel=1e-14)
        assert est.beta.value == pytest.approx(1.0, rel=1e-14)

    def test_unstable_denominator(self):
        with pytest.raises(EstimationError) as err:
            switch_estimates_from_freq(FreqStats(0.2, 0.5, 1000), u_star=0.0)
        assert "q_hat" in err.value.diagnostics

    def test_censored_unstable_denominator(self):
        with pytest.raises(EstimationError):
            switch_estimates_from_freq(FreqStats(0.1, 0.4, 1000), u_star=0.5)

    def test_bad_ustar(self):
        with pytest.raises(DomainError):
            switch_estimates_from_freq(FreqStats(0.2, 0.1, 10), u_star=1.0)


class TestMargpRecovery:
    def test_benchmark_parameters(self):
        g = GpdParams(XI, SIGMA)
        m = MargpParams(ArgpParams(g, BETA), GAMMA)
        path = simulate_margp(m, 10**5, seed=13)
        est = estimate_margp(path, g, beta_f=BETA, eps_f=1e-6)
        assert abs(est.beta.value - BETA) < 0.02
        assert abs(est.gamma.value - GAMMA) < 0.02


class TestTargpRecovery:
    def test_ustar_zero_matches_margp_bitwise(self):
        g = GpdParams(0.25, 1.0)
        m = MargpParams(ArgpParams(g, 0.6), 0.5)
        path = simulate_margp(m, 20000, seed=17)
        a = estimate_margp(path, g, beta_f=0.6, eps_f=1e-6)
        b = estimate_targp(path.values, 0.0, g, beta_f=0.6, eps_f=1e-6)
        assert a == b

    def test_benchmark_parameters(self):
        # known-parameter estimation on a censored path, both switch
        # parameters within +-0.03
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 10**5, seed=19)
        est = estimate_targp(path, t.u_star, GpdParams(XI, SIGMA_U),
                             beta_f=BETA, eps_f=1e-6)
        assert abs(est.gamma.value - GAMMA) < 0.03
        assert abs(est.beta.value - BETA) < 0.03


class TestBeta0:
    def test_argp_recovery_on_coarse_grid(self):
        p = ArgpParams(GpdParams(0.25, 1.0), 0.7)
        path = simulate_argp(p, 10**4, seed=23)
        grid = np.round(np.arange(0.05, 1.0 + 1e-9, 0.05), 10)
        assert estimate_beta0(path, p.gpd, grid=grid) == pytest.approx(0.70)

    def test_iid_path_has_no_curve_mass(self):
        g = GpdParams(0.25, 1.0)
        m = MargpParams(ArgpParams(g, 0.6), 0.0)   # gamma = 0: i.i.d.
        path = simulate_margp(m, 10**4, seed=29)
        with pytest.raises(EstimationError):
            estimate_beta0(path, g)

    def test_constant_path_prefers_identity_curve(self):
        p = ArgpParams(GpdParams(0.25, 1.0), 1.0)
        path = simulate_argp(p, 500, seed=31, x0_mode="fixed", x0=1.0)
        assert estimate_beta0(path, p.gpd) == 1.0

    def test_bad_grid(self):
        with pytest.raises(DomainError):
            estimate_beta0(np.array([1.0, 2.0]), GpdParams(0.25, 1.0), grid=[0.0, 0.5])


class TestScaleAtThreshold:
    def test_exponential_is_memoryless(self):
        spec = scale_at_threshold(GpdParams(0.0, 3.0), 10.0)
        assert spec.sigma_u == 3.0

    def test_benchmark_value(self):
        spec = scale_at_threshold(GpdParams(XI, SIGMA), U)
        assert spec.sigma_u == pytest.approx(12688.6384, abs=1e-6)

    def test_negative_scale_rejected(self):
        with pytest.raises(DomainError):
            scale_at_threshold(GpdParams(-0.4, 1.0), 3.0)
        with pytest.raises(DomainError):
            scale_at_threshold(GpdParams(0.2, 1.0), -1.0)


def _identity_tol(prob, n, c_mix=3.0):
    return 3.0 * c_mix * math.sqrt(prob * (1.0 - prob) / n)


class TestFrequencyIdentities:
    """Empirical transition frequencies against their analytic values.

    The decrease-probability identities hold exactly for the simulated
    recursion.  The increase-not-on-the-curve identities are biased upward
    by the min-branch landing strictly between the previous value and its
    image, so several cells fail; the assertions state the claimed values
    unchanged."""

    N = 10**5

    @pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_argp_decrease_identity(self, beta):
        p = ArgpParams(GpdParams(0.25, 1.0), beta)
        path = simulate_argp(p, self.N, seed=37)
        _, freq = estimate_beta_argp(path)
        target = (1.0 - beta) / 2.0
        assert abs(freq.p_hat - target) < _identity_tol(target, self.N)

    @pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_margp_decrease_identity(self, beta):
        g = GpdParams(0.25, 1.0)
        m = MargpParams(ArgpParams(g, beta), 0.5)
        path = simulate_margp(m, self.N, seed=41)
        freq = frequency_stats(path, g, beta_f=beta, eps_f=1e-6)
        target = (1.0 - beta * 0.5) / 2.0
        assert abs(freq.p_hat - target) < _identity_tol(target, self.N)

    @pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_margp_offcurve_increase_identity(self, beta):
        g = GpdParams(0.25, 1.0)
        m = MargpParams(ArgpParams(g, beta), 0.5)
        path = simulate_margp(m, self.N, seed=43)
        freq = frequency_stats(path, g, beta_f=beta, eps_f=1e-6)
        target = (1.0 - 0.5) / 2.0
        assert abs(freq.q_hat - target) < _identity_tol(target, self.N)

    @pytest.mark.parametrize("ustar", [0.2, 0.5, 0.8])
    def test_targp_decrease_identity(self, ustar):
        beta = gamma = 0.5
        g = GpdParams(0.25, 1.0)
        t = targp_params(0.25, 1.0, beta, gamma, float(quantile(g, ustar)))
        path = simulate_targp(t, self.N, seed=47)
        gu = GpdParams(t.gpd.xi, t.gpd.sigma + t.gpd.xi * t.u)
        freq = frequency_stats(path, gu, beta_f=beta, eps_f=1e-6, u_star=t.u_star)
        target = (1.0 - beta * gamma) * (1.0 - ustar**2) / 2.0
        assert abs(freq.p_hat - target) < _identity_tol(target, self.N)

    @pytest.mark.parametrize("ustar", [0.2, 0.5, 0.8])
    def test_targp_offcurve_increase_identity(self, ustar):
        beta = gamma = 0.5
        g = GpdParams(0.25, 1.0)
        t = targp_params(0.25, 1.0, beta, gamma, float(quantile(g, ustar)))
        path = simulate_targp(t, self.N, seed=53)
        gu = GpdParams(t.gpd.xi, t.gpd.sigma + t.gpd.xi * t.u)
        freq = frequency_stats(path, gu, beta_f=beta, eps_f=1e-6, u_star=t.u_star)
        target = (1.0 - gamma) * (1.0 - ustar**2) / 2.0
        assert abs(freq.q_hat - target) < _identity_tol(target, self.N)


class TestConsistency:
    def test_switch_estimators_converge(self):
        # median absolute error must shrink from n=1e4 to n=1e6
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        gu = GpdParams(XI, SIGMA_U)
        errs = {10**4: [], 10**6: []}
        for rep in range(50):
            for n in errs:
                path = simulate_targp(t, n, seed=1000 + rep * 7 + n % 13)
                est = estimate_targp(path, t.u_star, gu, beta_f=BETA, eps_f=1e-6)
                errs[n].append(abs(est.beta.value - BETA) + abs(est.gamma.value - GAMMA))
        assert np.median(errs[10**6]) < np.median(errs[10**4])

    def test_mle_converges(self):
        p = GpdParams(XI, SIGMA)
        errs = {10**4: [], 10**6: []}
        rng = np.random.default_rng(3)
        for rep in range(11):
            for n in errs:
                fit, _ = mle_gpd(sample(p, rng, size=n))
                errs[n].append(abs(fit.xi - XI))
        assert np.median(errs[10**6]) < np.median(errs[10**4])


class TestPipeline:
    def test_benchmark_smoke(self):
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 3888, seed=59)
        report = fit_pipeline(path, U, n_bootstrap=200, seed=101)
        assert abs(report.gpd.xi - XI) < 0.15
        assert abs(report.gpd.sigma / SIGMA_U - 1.0) < 0.15
        assert abs(report.beta.value - BETA) < 0.1
        assert abs(report.gamma.value - GAMMA) < 0.1
        assert abs(report.u_star - USTAR) < 0.05
        assert report.n == 3888 and report.n_exceed == int(np.sum(path.values > 0))
        assert set(report.se) == {"xi", "sigma_u", "sigma0", "beta", "gamma"}
        assert all(v > 0 for v in report.se.values())

    def test_raw_series_input_matches_path_input(self):
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 3888, seed=61)
        raw = np.where(path.values > 0, path.values + U, 0.0)
        a = fit_pipeline(path, U, n_bootstrap=0)
        b = fit_pipeline(raw, U, n_bootstrap=0)
        assert a.to_dict() == b.to_dict()

    def test_all_zero_series(self):
        with pytest.raises(InsufficientDataError):
            fit_pipeline(np.zeros(1000), 10.0)

    def test_deterministic(self):
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 3888, seed=67)
        a = fit_pipeline(path, U, n_bootstrap=100, seed=5)
        b = fit_pipeline(path, U, n_bootstrap=100, seed=5)
        assert a.to_dict() == b.to_dict()

    def test_refit_self_consistency(self):
        # refit a path simulated at the fitted parameters: estimates move
        # by less than two bootstrap standard errors
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 3888, seed=71)
        first = fit_pipeline(path, U, n_bootstrap=300, seed=7)
        t2 = targp_params(first.gpd.xi, first.sigma0, first.beta.value,
                          first.gamma.value, U)
        resim = simulate_targp(t2, 20000, seed=73)
        second = fit_pipeline(resim, U, n_bootstrap=0)
        assert abs(second.gpd.xi - first.gpd.xi) < 2 * first.se["xi"]
        assert abs(second.gpd.sigma - first.gpd.sigma) < 2 * first.se["sigma_u"]
        assert abs(second.beta.value - first.beta.value) < 2 * first.se["beta"]
        assert abs(second.gamma.value - first.gamma.value) < 2 * first.se["gamma"]

    def test_report_serialization(self):
        t = targp_params(XI, SIGMA, BETA, GAMMA, U)
        path = simulate_targp(t, 3888, seed=79)
        report = fit_pipeline(path, U, n_bootstrap=0)
        doc = json.loads(report.to_json())
        assert set(doc) == {"xi", "sigma_u", "sigma0", "u", "u_star", "beta",
                            "gamma", "beta0", "p_hat", "q_hat", "n", "n_exceed",
                            "loglik", "se", "flags"}
        assert doc["u"] == U
        assert doc["sigma0"] == pytest.approx(doc["sigma_u"] - doc["xi"] * U, rel=1e-12)
        assert isinstance(doc["flags"], list)
