"""Stationarity-preserving transition maps.

``f_star`` is the unique increasing map on [0, 1] such that applying it to
the copula scale of the process keeps uniform marginals:

    f_star(u) = u / ((1 - beta) u + beta)

``f_gpd`` is its conjugate on the observation scale, G^{-1} o f_star o G.
The conjugation is evaluated on the log-survivor scale, which keeps full
relative precision at both endpoints (the naive composition loses ~1e-2
near the right endpoint for xi < 0).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .gpd import GpdParams, log_survivor, quantile_from_log_survivor


def _check_beta(beta: float):
    if not (0.0 <= beta <= 1.0):
        raise DomainError(f"beta must lie in [0, 1], got {beta}")


def _check_unit(u, name="u"):
    ua = np.asarray(u, dtype=float)
    if np.any((ua < 0.0) | (ua > 1.0)) or not np.all(np.isfinite(ua)):
        raise DomainError(f"{name} must lie in [0, 1], got {u}")
    return ua


def f_star(beta: float, u):
    """Copula-scale transition map; identity at beta = 1.

    At beta = 0 the map degenerates to the pointwise limit: 1 on (0, 1]
    and 0 at 0, which keeps simulation at beta = 0 well defined.
    """
    _check_beta(beta)
    ua = _check_unit(u)
    if beta == 0.0:
        out = np.where(ua > 0.0, 1.0, 0.0)
    else:
        # the ratio can exceed 1 by one ulp when the denominator rounds down
        out = np.minimum(np.where(ua == 0.0, 0.0, ua / ((1.0 - beta) * ua + beta)), 1.0)
    return out if out.ndim else float(out)


def f_star_inv(beta: float, u):
    """Inverse map, beta * u / (1 - (1 - beta) u); undefined at beta = 0."""
    _check_beta(beta)
    if beta == 0.0:
        raise DomainError("f_star is not invertible at beta = 0")
    ua = _check_unit(u)
    with np.errstate(divide="ignore"):
        out = np.clip(beta * ua / (1.0 - (1.0 - beta) * ua), 0.0, 1.0)
    return out if out.ndim else float(out)


def f_gpd(p: GpdParams, beta: float, x):
    """Observation-scale transition map for GPD marginals.

    Composition G^{-1}(f_star(G(x))) carried out via log-survivors:
    with s = log(1 - G(x)), the image has log-survivor
    s - log1p((1 - beta)(1 - e^s)/beta).  At beta = 0 the image is the
    right endpoint of the support (inf when xi >= 0).
    """
    _check_beta(beta)
    xa = np.asarray(x, dtype=float)
    sup = p.support
    if np.any(xa < sup.lo) or np.any(xa > sup.hi):
        raise DomainError(f"x outside the support [{sup.lo}, {sup.hi}]")
    if beta == 0.0:
        out = np.where(xa > 0.0, sup.hi, 0.0)
        return out if np.ndim(x) else float(out)
    ls = np.asarray(log_survivor(p, xa), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ls_f = ls - np.log1p((1.0 - beta) * (-np.expm1(ls)) / beta)
    out = quantile_from_log_survivor(p, ls_f)
    return out if np.ndim(x) else float(out)


def f_iterate(p: GpdParams, beta: float, x: float, k: int):
    """k-fold iterate of ``f_gpd``; k = 0 returns x unchanged.

    Iteration runs on the log-survivor scale (for xi >= 0 the x-scale
    iterates diverge quickly and would overflow).
    """
    _check_beta(beta)
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    sup = p.support
    if not (sup.lo <= x <= sup.hi):
        raise DomainError(f"x outside the support [{sup.lo}, {sup.hi}]")
    if k == 0:
        return float(x)
    if beta == 0.0:
        return float(sup.hi) if x > 0.0 else 0.0
    if beta == 1.0:
        return float(x)
    ls = float(log_survivor(p, x))
    for _ in range(int(k)):
        ls = ls - math.log1p((1.0 - beta) * (-math.expm1(ls)) / beta)
    return float(quantile_from_log_survivor(p, ls))
