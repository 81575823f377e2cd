"""Generalized Pareto distribution primitives.

The distribution G_{xi,sigma} has cdf

    G(x) = 1 - (1 + xi*x/sigma)^(-1/xi)    (xi != 0)
    G(x) = 1 - exp(-x/sigma)               (xi == 0)

on the support [0, inf) for xi >= 0 and [0, -sigma/xi] for xi < 0.  All
functions take a :class:`GpdParams` first and accept scalars or numpy
arrays for the data argument.  Near xi = 0 the power-law branch is
numerically unstable, so the exponential branch is used whenever
``abs(xi) < XI_ZERO_TOL``; elsewhere everything is routed through
``expm1``/``log1p`` so both tails keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError

#: below this |xi| the exponential branch is used
XI_ZERO_TOL = 1e-8

#: shapes at or below -1/2 are rejected (inference is ill-behaved there)
XI_LOWER_BOUND = -0.5


@dataclass(frozen=True)
class GpdParams:
    """Shape/scale parameter pair with validation on construction.

    xi is dimensionless; sigma carries the units of the observable.
    """

    xi: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.xi > XI_LOWER_BOUND) or not math.isfinite(self.xi):
            raise DomainError(f"xi must exceed {XI_LOWER_BOUND}, got {self.xi}")

    @property
    def support(self) -> "Support":
        hi = math.inf if self.xi >= 0.0 else -self.sigma / self.xi
        return Support(0.0, hi)


@dataclass(frozen=True)
class Support:
    """Closed-from-the-left support interval [lo, hi]."""

    lo: float
    hi: float

    def __contains__(self, x) -> bool:
        return bool(np.all((np.asarray(x) >= self.lo) & (np.asarray(x) <= self.hi)))


def _is_exponential(p: GpdParams) -> bool:
    return abs(p.xi) < XI_ZERO_TOL


def cdf(p: GpdParams, x):
    """Cumulative distribution function; 0 below the support, 1 above it."""
    x = np.asarray(x, dtype=float)
    z = np.clip(x, 0.0, None) / p.sigma
    if _is_exponential(p):
        out = -np.expm1(-z)
    else:
        w = np.maximum(1.0 + p.xi * z, 0.0)
        with np.errstate(divide="ignore"):
            out = np.where(w > 0.0, -np.expm1(-np.log1p(p.xi * np.minimum(z, _z_hi(p))) / p.xi), 1.0)
    return out if out.ndim else float(out)


def _z_hi(p: GpdParams) -> float:
    # largest z with 1 + xi*z > 0, used to keep log1p arguments valid
    if p.xi >= 0.0:
        return math.inf
    return -1.0 / p.xi * (1.0 - 1e-16)


def log_survivor(p: GpdParams, x):
    """log(1 - G(x)), exact in both tails."""
    x = np.asarray(x, dtype=float)
    z = np.clip(x, 0.0, None) / p.sigma
    if _is_exponential(p):
        out = -z
    else:
        w = 1.0 + p.xi * z
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(w > 0.0, -np.log1p(p.xi * np.minimum(z, _z_hi(p))) / p.xi, -np.inf)
    return out if out.ndim else float(out)


def quantile(p: GpdParams, q):
    """Quantile function G^{-1}(q) for q in [0, 1).

    q = 1 is allowed only for xi < 0 (finite right endpoint); for xi >= 0 it
    raises :class:`DomainError`, as does any q outside [0, 1].
    """
    qa = np.asarray(q, dtype=float)
    if np.any((qa < 0.0) | (qa > 1.0)) or not np.all(np.isfinite(qa)):
        raise DomainError(f"quantile level must lie in [0, 1], got {q}")
    if np.any(qa == 1.0) and p.xi >= 0.0:
        raise DomainError("quantile(1) is unbounded for xi >= 0")
    with np.errstate(divide="ignore"):
        if _is_exponential(p):
            out = -p.sigma * np.log1p(-qa)
        else:
            out = p.sigma / p.xi * np.expm1(-p.xi * np.log1p(-qa))
    return out if out.ndim else float(out)


def quantile_from_log_survivor(p: GpdParams, log_sf):
    """Inverse of :func:`log_survivor`; stable deep in the upper tail."""
    log_sf = np.asarray(log_sf, dtype=float)
    if _is_exponential(p):
        out = -p.sigma * log_sf
    else:
        out = p.sigma / p.xi * np.expm1(-p.xi * log_sf)
    return out if out.ndim else float(out)


def log_density(p: GpdParams, x):
    """Log of the density; -inf outside the support (never raises)."""
    x = np.asarray(x, dtype=float)
    z = x / p.sigma
    if _is_exponential(p):
        out = np.where(x >= 0.0, -math.log(p.sigma) - z, -np.inf)
    else:
        w = 1.0 + p.xi * z
        inside = (x >= 0.0) & (w > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(
                inside,
                -math.log(p.sigma) - (1.0 + 1.0 / p.xi) * np.log1p(p.xi * np.where(inside, z, 0.0)),
                -np.inf,
            )
    return out if out.ndim else float(out)


def sample(p: GpdParams, rng: np.random.Generator, size=None):
    """Inverse-transform sampling: one uniform per draw, reproducible by seed."""
    return quantile(p, rng.random(size))


def moment(p: GpdParams, r: float) -> float:
    """r-th raw moment E[X^r]; finite only when r*xi < 1.

    r = 1 and r = 2 use the closed forms sigma/(1-xi) and
    2*sigma^2/((1-2xi)(1-xi)); other orders integrate the quantile function.
    """
    if r <= 0.0:
        raise DomainError(f"moment order must be positive, got {r}")
    if r * p.xi >= 1.0:
        raise DomainError(f"moment of order {r} is infinite for xi = {p.xi}")
    xi = 0.0 if _is_exponential(p) else p.xi
    if r == 1.0:
        return p.sigma / (1.0 - xi)
    if r == 2.0:
        return 2.0 * p.sigma**2 / ((1.0 - 2.0 * xi) * (1.0 - xi))
    return moment_quadrature(p, r)


def moment_quadrature(p: GpdParams, r: float, tol: float = 1e-10) -> float:
    """Moment by quadrature of G^{-1}(1-e^{-v})^r e^{-v} over v in (0, inf).

    The substitution removes the integrable endpoint singularity of the
    quantile at 1 (xi > 0).  Scale enters as sigma^r.
    """
    if r * p.xi >= 1.0:
        raise DomainError(f"moment of order {r} is infinite for xi = {p.xi}")
    xi = 0.0 if _is_exponential(p) else p.xi
    if xi == 0.0:
        integrand = lambda v: v**r * math.exp(-v)
        vmax = 60.0 + 20.0 * r
    else:
        integrand = lambda v: (math.expm1(xi * v) / xi) ** r * math.exp(-v)
        # tail decays like e^{(r*xi-1)v}
        vmax = 60.0 / (1.0 - r * xi) + 60.0
    val, _ = quad(integrand, 0.0, vmax, epsabs=tol, epsrel=tol, limit=500)
    return p.sigma**r * val
