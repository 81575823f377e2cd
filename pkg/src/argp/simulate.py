"""Exact path simulation of the ARGP, MARGP and TARGP processes.

The ARGP recursion, with U_t ~ Bernoulli(beta) and eps_t ~ G i.i.d.:

    X_t = U_t f(X_{t-1}) + (1 - U_t) min{f(X_{t-1}), eps_t}

The MARGP wraps it in a second switch W_t ~ Bernoulli(gamma) that replaces
the value with a fresh draw (stochastic increases become possible):

    X~_t = W_t [ARGP step from X~_{t-1}] + (1 - W_t) eps~_t

and the TARGP censors at a threshold u:  V_t = max(X~_t - u, 0).

Simulation runs on the copula (PIT) scale internally, where the recursion
uses f_star and stays in [0, 1] regardless of xi, and maps out through the
quantile function once at the end.

Random-stream contract: each step consumes exactly three uniforms
(W_t, U_t, innovation) in that order, whether or not a branch uses them,
and eps_t / eps~_t share the single innovation slot.  Consequently a
MARGP path at gamma = 1 is bit-identical to the ARGP path with the same
seed, and a TARGP path at u = 0 is bit-identical to the MARGP path.
Stationary start mode consumes one extra uniform up front for X_0.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DomainError
from .gpd import GpdParams, cdf, quantile

KIND_ARGP = "ARGP"
KIND_MARGP = "MARGP"
KIND_TARGP = "TARGP"


@dataclass(frozen=True)
class ArgpParams:
    gpd: GpdParams
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.beta <= 1.0):
            raise DomainError(f"beta must lie in [0, 1], got {self.beta}")


@dataclass(frozen=True)
class MargpParams:
    argp: ArgpParams
    gamma: float

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")

    @property
    def gpd(self) -> GpdParams:
        return self.argp.gpd

    @property
    def beta(self) -> float:
        return self.argp.beta


@dataclass(frozen=True)
class TargpParams:
    margp: MargpParams
    u: float
    u_star: float = field(init=False)

    def __post_init__(self):
        sup = self.gpd.support
        if not (sup.lo <= self.u <= sup.hi):
            raise DomainError(f"threshold u must lie in the support, got {self.u}")
        object.__setattr__(self, "u_star", float(cdf(self.gpd, self.u)))

    @property
    def gpd(self) -> GpdParams:
        return self.margp.gpd

    @property
    def beta(self) -> float:
        return self.margp.beta

    @property
    def gamma(self) -> float:
        return self.margp.gamma


def targp_params(xi: float, sigma: float, beta: float, gamma: float, u: float) -> TargpParams:
    """Convenience constructor from flat values."""
    return TargpParams(MargpParams(ArgpParams(GpdParams(xi, sigma), beta), gamma), u)


@dataclass(frozen=True)
class Path:
    """A simulated series plus the configuration that produced it."""

    values: np.ndarray
    kind: str
    seed: int
    x0_mode: str = "stationary"
    x0: float | None = None

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class PitPath:
    """A series on the copula scale, all values in [0, 1]."""

    values: np.ndarray

    def __len__(self):
        return len(self.values)


@njit(cache=True)
def _recurse_pit(x0_star, beta, gamma, us):  # pragma: no cover - jitted
    n = us.shape[0] // 3
    out = np.empty(n)
    x = x0_star
    for t in range(n):
        w = us[3 * t] < gamma
        u = us[3 * t + 1] < beta
        e = us[3 * t + 2]
        if x == 0.0:
            fx = 0.0
        elif beta == 0.0:
            fx = 1.0
        else:
            # ratio can exceed 1 by one ulp; keep the chain inside [0, 1]
            fx = min(x / ((1.0 - beta) * x + beta), 1.0)
        inner = fx if u else min(fx, e)
        x = inner if w else e
        out[t] = x
    return out


def _pit_values(gpd: GpdParams, beta: float, gamma: float, n: int, seed: int,
                x0_mode: str, x0) -> np.ndarray:
    if n < 1:
        raise DomainError(f"path length must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    if x0_mode == "stationary":
        x0_star = rng.random()
    elif x0_mode == "fixed":
        if x0 is None:
            raise DomainError("x0_mode='fixed' requires x0")
        sup = gpd.support
        if not (sup.lo <= x0 <= sup.hi):
            raise DomainError(f"x0 outside the support [{sup.lo}, {sup.hi}]")
        x0_star = float(cdf(gpd, x0))
    else:
        raise DomainError(f"unknown x0_mode {x0_mode!r}")
    us = rng.random(3 * n)
    return _recurse_pit(x0_star, beta, gamma, us)


def simulate_argp(p: ArgpParams, n: int, seed: int, x0_mode: str = "stationary",
                  x0: float | None = None) -> Path:
    """Simulate n steps of the ARGP recursion (X_1 .. X_n).

    Deterministic given the seed.  Every step satisfies
    X_t <= f(X_{t-1}); in stationary mode X_0 is a single marginal draw.
    """
    xs = _pit_values(p.gpd, p.beta, 1.0, n, seed, x0_mode, x0)
    values = np.asarray(quantile(p.gpd, xs), dtype=float)
    return Path(values, KIND_ARGP, seed, x0_mode, x0)


def simulate_margp(p: MargpParams, n: int, seed: int, x0_mode: str = "stationary",
                   x0: float | None = None) -> Path:
    """Simulate the switch-wrapped recursion; gamma = 1 reproduces ARGP exactly."""
    xs = _pit_values(p.gpd, p.beta, p.gamma, n, seed, x0_mode, x0)
    values = np.asarray(quantile(p.gpd, xs), dtype=float)
    return Path(values, KIND_MARGP, seed, x0_mode, x0)


def simulate_targp(p: TargpParams, n: int, seed: int, x0_mode: str = "stationary",
                   x0: float | None = None) -> Path:
    """Simulate the censored process V_t = max(X~_t - u, 0).

    Censored steps are stored as exact 0.0, so censoring status is
    recoverable as ``values == 0``.
    """
    xs = _pit_values(p.gpd, p.beta, p.gamma, n, seed, x0_mode, x0)
    xv = np.asarray(quantile(p.gpd, xs), dtype=float)
    values = np.where(xv > p.u, xv - p.u, 0.0)
    return Path(values, KIND_TARGP, seed, x0_mode, x0)


def pit(path: Path, p: GpdParams, u: float = 0.0) -> PitPath:
    """Map a path through the marginal cdf (probability integral transform).

    For TARGP paths pass the censoring threshold ``u``: positive values are
    mapped as G(v + u) and exact zeros to the censoring probability G(u).
    """
    v = np.asarray(path.values, dtype=float)
    if path.kind == KIND_TARGP and u > 0.0:
        ustar = float(cdf(p, u))
        out = np.where(v > 0.0, cdf(p, v + u), ustar)
    else:
        out = np.asarray(cdf(p, v), dtype=float)
    return PitPath(out)


def lagged_pairs(pit_path: PitPath) -> np.ndarray:
    """Consecutive pairs (u_{t-1}, u_t) as an (n-1, 2) array.

    For an ARGP path no pair lies strictly above the curve v = f_star(u);
    for a MARGP path with gamma < 1 a positive fraction does.
    """
    v = np.asarray(pit_path.values, dtype=float)
    if len(v) < 2:
        raise DomainError("need at least two values to form lagged pairs")
    return np.column_stack([v[:-1], v[1:]])


def write_path_csv(path: Path, file) -> None:
    """Write ``t,value`` rows (t = 1..n) with 17 significant digits."""
    _write_rows(file, "t,value", ((t + 1, v) for t, v in enumerate(path.values)))


def write_pairs_csv(pairs: np.ndarray, file) -> None:
    """Write ``t,u_prev,u_curr`` rows for lagged PIT pairs."""
    _write_rows(file, "t,u_prev,u_curr",
                ((t + 1, a, b) for t, (a, b) in enumerate(pairs)))


def _write_rows(file, header: str, rows) -> None:
    own = isinstance(file, (str, bytes, os.PathLike))
    fh = open(file, "w", encoding="utf-8", newline="\n") if own else file
    try:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if own:
            fh.close()


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")
