"""Model analytics: conditional means, lag-1 dependence, and fit diagnostics.

With the marginal reduced to sigma = 1 (scale is restored afterwards), the
conditional mean given the previous copula coordinate x is

    H2(x) = beta/((1-beta)x + beta) * G^{-1}(f_star(x))
            + (1-beta) * integral_0^{f_star(x)} G^{-1}(s) ds

and the lag-1 covariance is Cov = integral_0^1 G^{-1}(s) H2(s) ds - m1^2,
Cor = Cov / (m2 - m1^2).  All integrals substitute s = 1 - e^{-v}, which
removes the integrable singularity of G^{-1} at 1 for xi > 0; the outer
integrand is assembled from e^{-v/2}-scaled factors so that nothing
overflows for any xi < 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, InsufficientDataError
from .gpd import XI_ZERO_TOL, GpdParams, cdf
from .interarrival import five_number_summary

#: quadrature tolerances (absolute, at sigma = 1)
H2_TOL = 1e-9
COV_TOL = 1e-8


@dataclass(frozen=True)
class LagOneStats:
    cov: float
    cor: float
    m1: float
    m2: float


@dataclass(frozen=True)
class GofResult:
    """Marginal goodness-of-fit: empirical-cdf sup-distance and PIT histogram.

    No p-values: the usual i.i.d. reference tables do not apply to
    serially dependent paths, so only the distance and the 20-bin PIT
    histogram are reported.
    """

    distance: float
    pit_hist: np.ndarray
    n: int


@dataclass(frozen=True)
class BoxSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int
    n_excluded: int = 0


def _xi_of(p: GpdParams) -> float:
    return 0.0 if abs(p.xi) < XI_ZERO_TOL else p.xi


def _qinv_v(v: float, xi: float) -> float:
    # G^{-1}(1 - e^{-v}) at sigma = 1
    if xi == 0.0:
        return v
    return math.expm1(xi * v) / xi


def _inner_integral(V: float, xi: float, tol: float) -> float:
    # integral of G^{-1}(s) ds over s in (0, 1 - e^{-V}), sigma = 1
    if V <= 0.0:
        return 0.0
    V = min(V, 60.0 / max(1.0 - xi, 1e-6) + 60.0)  # tail below tol for xi < 1
    val, _ = quad(lambda t: _qinv_v(t, xi) * math.exp(-t), 0.0, V,
                  epsabs=tol, epsrel=tol * 10, limit=300)
    return val


def _h2_scaled(v: float, beta: float, xi: float, tol: float) -> float:
    """H2(1 - e^{-v}) * e^{-v/2} at sigma = 1, stable for large v."""
    ev = math.exp(-v)
    c = 1.0 - (1.0 - beta) * ev            # (1-beta)s + beta at s = 1-e^{-v}
    lcb = math.log(c / beta)
    if xi == 0.0:
        qf_scaled = (v + lcb) * math.exp(-0.5 * v)
    else:
        qf_scaled = (math.exp((xi - 0.5) * v + xi * lcb) - math.exp(-0.5 * v)) / xi
    inner = _inner_integral(v + lcb, xi, tol)
    return (beta / c) * qf_scaled + (1.0 - beta) * inner * math.exp(-0.5 * v)


def h2(p: GpdParams, beta: float, x: float) -> float:
    """Conditional mean of the next value given copula coordinate x.

    Defined for xi < 1 and x in [0, 1); x = 1 is rejected (the conditional
    mean is unbounded there for xi >= 0).  Scale enters linearly.
    """
    if not (0.0 < beta <= 1.0):
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    xi = _xi_of(p)
    if xi >= 1.0:
        raise DomainError(f"conditional mean needs xi < 1, got {xi}")
    if not (0.0 <= x < 1.0):
        raise DomainError(f"x must lie in [0, 1), got {x}")
    if x == 0.0:
        return 0.0
    v = -math.log1p(-x)
    return p.sigma * _h2_scaled(v, beta, xi, H2_TOL) * math.exp(0.5 * v)


def lag_one_stats(p: GpdParams, beta: float) -> LagOneStats:
    """Lag-1 covariance and correlation of a stationary path.

    Needs xi < 1/2 (finite variance).  The covariance scales as sigma^2;
    the correlation is scale-free by construction (computed at sigma = 1).
    """
    if not (0.0 < beta <= 1.0):
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    xi = _xi_of(p)
    if xi >= 0.5:
        raise DomainError(f"lag-1 moments need xi < 1/2, got {xi}")
    m1 = 1.0 / (1.0 - xi)
    m2 = 2.0 / ((1.0 - 2.0 * xi) * (1.0 - xi))
    vmax = 60.0 / (1.0 - 2.0 * max(xi, 0.0)) + 60.0
    val, _ = quad(lambda v: _qinv_v_scaled(v, xi) * _h2_scaled(v, beta, xi, H2_TOL),
                  0.0, vmax, epsabs=COV_TOL, epsrel=COV_TOL * 10, limit=500)
    cov1 = val - m1 * m1
    cor = cov1 / (m2 - m1 * m1)
    return LagOneStats(cov=p.sigma**2 * cov1, cor=float(cor),
                       m1=p.sigma * m1, m2=p.sigma**2 * m2)


def _qinv_v_scaled(v: float, xi: float) -> float:
    # G^{-1}(1 - e^{-v}) * e^{-v/2}; bounded on [0, inf) for xi < 1/2
    if xi == 0.0:
        return v * math.exp(-0.5 * v)
    return (math.exp((xi - 0.5) * v) - math.exp(-0.5 * v)) / xi


def gof_marginal(exceedances, p: GpdParams, bins: int = 20) -> GofResult:
    """Kolmogorov-Smirnov-style sup-distance plus a PIT histogram."""
    x = np.sort(np.asarray(exceedances, dtype=float))
    if len(x) == 0:
        raise InsufficientDataError("empty sample")
    n = len(x)
    fx = np.asarray(cdf(p, x), dtype=float)
    grid = np.arange(1, n + 1) / n
    dist = max(float(np.max(grid - fx)), float(np.max(fx - (grid - 1.0 / n))))
    hist, _ = np.histogram(fx, bins=bins, range=(0.0, 1.0))
    return GofResult(distance=dist, pit_hist=hist, n=n)


def box_summary(values, log_scale: bool = False) -> BoxSummary:
    """Five-number summary plus mean, optionally on a logarithmic scale.

    With ``log_scale`` the quartiles are interpolated on log-values and
    mapped back (geometric positions), the mean is geometric, and
    nonpositive values are excluded with their count reported.
    """
    v = np.asarray(values, dtype=float)
    n_excluded = 0
    if log_scale:
        keep = v > 0.0
        n_excluded = int(np.sum(~keep))
        v = v[keep]
        if v.size == 0:
            raise InsufficientDataError("no positive values for the log scale")
        lv = np.log(v)
        lo, q1, med, q3, hi = five_number_summary(lv)
        return BoxSummary(*(float(math.exp(t)) for t in (lo, q1, med, q3, hi)),
                          mean=float(math.exp(np.mean(lv))), count=len(v),
                          n_excluded=n_excluded)
    if v.size == 0:
        raise InsufficientDataError("empty sample")
    lo, q1, med, q3, hi = five_number_summary(v)
    return BoxSummary(lo, q1, med, q3, hi, float(np.mean(v)), len(v), n_excluded)
