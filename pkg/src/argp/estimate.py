"""Parameter estimation for ARGP/MARGP/TARGP paths.

Two-stage procedure:

1. The marginal pair (xi, sigma) is fit by maximum likelihood on the
   exceedances, treating values as an i.i.d. sample (ergodicity makes this
   consistent on a single path), plus a preliminary grid value beta0 used
   only to evaluate the transition map f.
2. The switch probabilities come from empirical transition frequencies:

       p = freq{X_t < X_{t-1}}
       q = freq{X_t > X_{t-1}, X_t != f(X_{t-1})}

   ARGP:   beta = 1 - 2p
   MARGP:  gamma = 1 - 2q,            beta = (1 - 2p) / (1 - 2q)
   TARGP:  gamma = 1 - 2q/ub2,        beta = (ub2 - 2p) / (ub2 - 2q)
           with ub2 = 1 - u*^2.

The "equals f(X_{t-1})" test is carried out on the copula scale with an
absolute tolerance ``eps_f`` (scale-free; exact float equality only holds
for freshly simulated data).  Standard errors come from a moving-block
bootstrap, which respects the serial dependence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .dynamics import f_star
from .errors import DomainError, EstimationError, InsufficientDataError
from .gpd import XI_LOWER_BOUND, GpdParams, cdf
from .simulate import KIND_TARGP, Path

#: default copula-scale tolerance for the deterministic-transition test
EPS_F_DEFAULT = 1e-6

#: default grid tolerance and step for the preliminary beta estimator
EPS_GRID_DEFAULT = 0.01
GRID_STEP_DEFAULT = 0.01

#: default floor on the number of exceedances for the MLE
MIN_EXCEEDANCES = 30

#: boundary offset for the reparameterized shape, xi > -1/2 + delta
MLE_DELTA = 1e-3


@dataclass(frozen=True)
class FreqStats:
    """Empirical transition frequencies over consecutive pairs."""

    p_hat: float
    q_hat: float | None
    n_pairs: int


@dataclass(frozen=True)
class ClippedEstimate:
    """An estimate clipped to [0, 1], keeping the raw value for diagnostics."""

    value: float
    raw: float
    clipped: bool


@dataclass(frozen=True)
class SwitchEstimates:
    beta: ClippedEstimate
    gamma: ClippedEstimate
    freq: FreqStats


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold and the scale the exceedance marginal carries there."""

    u: float
    sigma_u: float


@dataclass(frozen=True)
class FitReport:
    gpd: GpdParams            # exceedance-scale fit: (xi, sigma(u))
    sigma0: float             # base scale sigma = sigma(u) - xi*u
    u: float
    u_star: float
    beta: ClippedEstimate
    gamma: ClippedEstimate
    beta0: float
    freq: FreqStats
    loglik: float
    n: int
    n_exceed: int
    se: dict | None = None
    flags: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        d = {
            "xi": self.gpd.xi,
            "sigma_u": self.gpd.sigma,
            "sigma0": self.sigma0,
            "u": self.u,
            "u_star": self.u_star,
            "beta": self.beta.value,
            "gamma": self.gamma.value,
            "beta0": self.beta0,
            "p_hat": self.freq.p_hat,
            "q_hat": self.freq.q_hat,
            "n": self.n,
            "n_exceed": self.n_exceed,
            "loglik": self.loglik,
            "se": dict(self.se) if self.se else {},
            "flags": list(self.flags),
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# maximum likelihood for the marginal
# ---------------------------------------------------------------------------

def gpd_negloglik(xi: float, sigma: float, x: np.ndarray) -> float:
    """Negative log-likelihood of an i.i.d. GPD sample; inf off the domain."""
    if sigma <= 0.0:
        return math.inf
    z = x / sigma
    if abs(xi) < 1e-12:
        return len(x) * math.log(sigma) + float(np.sum(z))
    w = 1.0 + xi * z
    if np.any(w <= 0.0):
        return math.inf
    return len(x) * math.log(sigma) + (1.0 + 1.0 / xi) * float(np.sum(np.log(w)))


def _softplus(a: float) -> float:
    return float(np.logaddexp(0.0, a))


def _softplus_inv(s: float) -> float:
    if s > 30.0:
        return s
    if s <= 0.0:
        raise ValueError("softplus inverse needs a positive argument")
    return s + math.log1p(-math.exp(-s))


def _unpack(theta) -> tuple[float, float]:
    xi = XI_LOWER_BOUND + MLE_DELTA + _softplus(theta[0])
    return xi, math.exp(theta[1])


def _pack(xi: float, sigma: float) -> np.ndarray:
    sp = max(xi - XI_LOWER_BOUND - MLE_DELTA, 1e-8)
    return np.array([_softplus_inv(sp), math.log(sigma)])


def _moment_seeds(x: np.ndarray) -> list[np.ndarray]:
    xbar = float(np.mean(x))
    s2 = float(np.var(x))
    xi0 = 0.5 * (1.0 - xbar * xbar / s2)
    xi0 = min(max(xi0, -0.45), 5.0)
    sig0 = max(xbar * (1.0 - min(xi0, 0.9)), 1e-300)
    return [
        _pack(xi0, sig0),
        _pack(1e-6, xbar),
        _pack(min(xi0 + 0.3, 5.0), sig0),
    ]


def mle_gpd(exceedances, min_count: int = MIN_EXCEEDANCES,
            warm: tuple[float, float] | None = None) -> tuple[GpdParams, float]:
    """Fit (xi, sigma) by a reparameterized Nelder-Mead search.

    The search space is unconstrained: xi = -1/2 + delta + softplus(a),
    sigma = exp(b), with three method-of-moments-style starts (or a single
    warm start when refitting a perturbed sample).  Returns the parameters
    and the attained log-likelihood.
    """
    x = np.asarray(exceedances, dtype=float)
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise DomainError("exceedances must be strictly positive and finite")
    if len(x) < min_count:
        raise InsufficientDataError(
            f"need at least {min_count} exceedances, got {len(x)}")
    if float(np.var(x)) == 0.0:
        raise EstimationError(
            "degenerate sample (all values equal); likelihood is unbounded",
            diagnostics={"value": float(x[0]), "n": len(x)})

    starts = [_pack(*warm)] if warm is not None else _moment_seeds(x)
    best = None
    any_success = False
    for s in starts:
        res = minimize(lambda th: gpd_negloglik(*_unpack(th), x), s,
                       method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 600})
        any_success = any_success or bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    xi, sigma = _unpack(best.x)
    if not any_success or not math.isfinite(best.fun):
        raise EstimationError(
            "optimizer failed to converge",
            diagnostics={"xi": xi, "sigma": sigma, "negloglik": float(best.fun),
                         "message": best.message})
    return GpdParams(xi, sigma), -float(best.fun)


# ---------------------------------------------------------------------------
# transition frequencies and the switch estimators
# ---------------------------------------------------------------------------

def _series(path_or_values) -> np.ndarray:
    if isinstance(path_or_values, Path):
        return np.asarray(path_or_values.values, dtype=float)
    return np.asarray(path_or_values, dtype=float)


def _pit_exceedance(values: np.ndarray, gpd: GpdParams, u_star: float) -> np.ndarray:
    """Copula coordinate of the underlying process on exceedance entries.

    For a censored series the positive entries carry the conditional law
    with the exceedance-scale parameters, so the unconditional coordinate
    is u* + (1 - u*) G(v).  Censored entries are mapped to u*.
    """
    out = np.full(values.shape, u_star, dtype=float)
    pos = values > 0.0
    out[pos] = u_star + (1.0 - u_star) * np.asarray(cdf(gpd, values[pos]), dtype=float)
    return out


def frequency_stats(path_or_values, gpd: GpdParams, beta_f: float,
                    eps_f: float = EPS_F_DEFAULT, u_star: float = 0.0) -> FreqStats:
    """Empirical p and q over consecutive pairs.

    q excludes transitions matching the deterministic map: both values
    positive and |x*_t - f_star(x*_{t-1})| < eps_f on the copula scale.
    A jump from a censored value to an exceedance counts toward q (the
    map sends 0 to 0, so the exclusion is vacuous there).
    """
    if eps_f <= 0.0:
        raise DomainError(f"eps_f must be positive, got {eps_f}")
    v = _series(path_or_values)
    if len(v) < 2:
        raise InsufficientDataError("need at least two values")
    prev, curr = v[:-1], v[1:]
    p = float(np.mean(curr < prev))
    xs = _pit_exceedance(v, gpd, u_star)
    xp, xc = xs[:-1], xs[1:]
    both = (prev > 0.0) & (curr > 0.0)
    image = np.zeros(len(prev), dtype=bool)
    if np.any(both):
        image[both] = np.abs(xc[both] - np.asarray(f_star(beta_f, xp[both]))) < eps_f
    q = float(np.mean((curr > prev) & ~image))
    return FreqStats(p_hat=p, q_hat=q, n_pairs=len(prev))


def _clip_unit(raw: float) -> ClippedEstimate:
    value = min(max(raw, 0.0), 1.0)
    return ClippedEstimate(value=float(value), raw=float(raw), clipped=value != raw)


def estimate_beta_argp(path_or_values) -> tuple[ClippedEstimate, FreqStats]:
    """beta = 1 - 2 * freq{X_t < X_{t-1}}, clipped to [0, 1] with a flag."""
    v = _series(path_or_values)
    if len(v) < 2:
        raise InsufficientDataError("need at least two values")
    prev, curr = v[:-1], v[1:]
    p = float(np.mean(curr < prev))
    freq = FreqStats(p_hat=p, q_hat=None, n_pairs=len(prev))
    return _clip_unit(1.0 - 2.0 * p), freq


def switch_estimates_from_freq(freq: FreqStats, u_star: float = 0.0) -> SwitchEstimates:
    """Apply the estimator formulas to given frequencies (censored at u*).

    With ub2 = 1 - u*^2: gamma = 1 - 2q/ub2, beta = (ub2 - 2p)/(ub2 - 2q).
    At u* = 0 this is the uncensored pair gamma = 1 - 2q,
    beta = (1 - 2p)/(1 - 2q).
    """
    if not (0.0 <= u_star < 1.0):
        raise DomainError(f"u_star must lie in [0, 1), got {u_star}")
    ub2 = 1.0 - u_star * u_star
    denom = ub2 - 2.0 * freq.q_hat
    if denom <= 0.0:
        raise EstimationError(
            f"unstable denominator: 1 - u*^2 - 2*q_hat = {denom:.6g} <= 0",
            diagnostics={"p_hat": freq.p_hat, "q_hat": freq.q_hat,
                         "u_star": u_star, "n_pairs": freq.n_pairs})
    gamma = _clip_unit(1.0 - 2.0 * freq.q_hat / ub2)
    beta = _clip_unit((ub2 - 2.0 * freq.p_hat) / denom)
    return SwitchEstimates(beta=beta, gamma=gamma, freq=freq)


def estimate_margp(path_or_values, gpd: GpdParams, beta_f: float,
                   eps_f: float = EPS_F_DEFAULT) -> SwitchEstimates:
    """Switch estimators for an uncensored path; f evaluated at beta_f."""
    freq = frequency_stats(path_or_values, gpd, beta_f, eps_f, u_star=0.0)
    return switch_estimates_from_freq(freq, u_star=0.0)


def estimate_targp(path_or_values, u_star: float, gpd: GpdParams, beta_f: float,
                   eps_f: float = EPS_F_DEFAULT) -> SwitchEstimates:
    """Censored switch estimators; ``gpd`` holds the exceedance-scale fit.

    u_star = 0 reduces exactly to :func:`estimate_margp`.
    """
    if not (0.0 <= u_star < 1.0):
        raise DomainError(f"u_star must lie in [0, 1), got {u_star}")
    freq = frequency_stats(path_or_values, gpd, beta_f, eps_f, u_star=u_star)
    return switch_estimates_from_freq(freq, u_star=u_star)


def estimate_beta0(path_or_values, gpd: GpdParams, grid=None,
                   eps_grid: float = EPS_GRID_DEFAULT, u_star: float = 0.0) -> float:
    """Preliminary beta: the grid point whose transition curve carries most mass.

    Counts pairs with |x*_t - f_star(beta_i, x*_{t-1})| < eps_grid on the
    copula scale (consecutive exceedances only, for censored series) and
    returns the maximizing grid value, ties broken toward larger beta.
    """
    if eps_grid <= 0.0:
        raise DomainError(f"eps_grid must be positive, got {eps_grid}")
    if grid is None:
        grid = np.round(np.arange(GRID_STEP_DEFAULT, 1.0 + 1e-12, GRID_STEP_DEFAULT), 12)
    grid = np.asarray(grid, dtype=float)
    if len(grid) == 0 or np.any((grid <= 0.0) | (grid > 1.0)):
        raise DomainError("grid must be nonempty with values in (0, 1]")
    v = _series(path_or_values)
    if len(v) < 2:
        raise InsufficientDataError("need at least two values")
    xs = _pit_exceedance(v, gpd, u_star)
    both = (v[:-1] > 0.0) & (v[1:] > 0.0)
    xp, xc = xs[:-1][both], xs[1:][both]
    counts = np.empty(len(grid), dtype=np.int64)
    for i, b in enumerate(grid):
        counts[i] = int(np.sum(np.abs(xc - np.asarray(f_star(b, xp))) < eps_grid))
    # a curve that carries mass must beat the eps-band count of a pure
    # background pair cloud by a wide margin; otherwise every band just
    # collects noise and the argmax is meaningless
    background = 2.0 * eps_grid * len(xp) / max(1.0 - u_star, 1e-6)
    threshold = background + 6.0 * math.sqrt(max(background, 1.0))
    if counts.max() <= threshold:
        raise EstimationError(
            "no transition mass near any candidate curve "
            "(gamma may be ~0 or the marginal fit may be off)",
            diagnostics={"grid": grid, "counts": counts, "threshold": threshold})
    # argmax with ties toward larger beta: scan ascending, keep >=
    best = 0
    for i in range(len(grid)):
        if counts[i] >= counts[best]:
            best = i
    return float(grid[best])


def scale_at_threshold(p: GpdParams, u: float) -> ThresholdSpec:
    """Scale carried by the exceedance marginal at threshold u: sigma + xi*u."""
    if u < 0.0:
        raise DomainError(f"threshold must be nonnegative, got {u}")
    sigma_u = p.sigma + p.xi * u
    if sigma_u <= 0.0:
        raise DomainError(
            f"sigma + xi*u = {sigma_u:.6g} <= 0; threshold outside the support")
    return ThresholdSpec(u=float(u), sigma_u=float(sigma_u))


# ---------------------------------------------------------------------------
# moving-block bootstrap and the full pipeline
# ---------------------------------------------------------------------------

def block_bootstrap_indices(n: int, block_length: int, rng: np.random.Generator) -> np.ndarray:
    """Index vector of a moving-block resample of length n."""
    n_blocks = -(-n // block_length)
    starts = rng.integers(0, n - block_length + 1, size=n_blocks)
    idx = (starts[:, None] + np.arange(block_length)[None, :]).ravel()
    return idx[:n]


def fit_pipeline(data, u: float, *, eps_f: float | None = None,
                 eps_grid: float = EPS_GRID_DEFAULT,
                 grid_step: float = GRID_STEP_DEFAULT,
                 n_bootstrap: int = 500, seed: int = 0,
                 min_exceedances: int = MIN_EXCEEDANCES) -> FitReport:
    """Full two-stage fit of a censored series at a known threshold u.

    ``data`` is either a TARGP :class:`Path` (values already truncated,
    v = max(x - u, 0)) or a raw series on the original scale, in which case
    the truncation v = max(data - u, 0) is applied here.  Stage 1 fits
    (xi, sigma(u)) on the exceedances and locates beta0 on a coarse grid
    (step ``grid_step``) followed by a local refinement pass; stage 2
    computes the censored frequency estimators with f evaluated at the
    stage-1 parameters.  ``eps_f`` defaults to ``eps_grid`` here: the match
    tolerance has to absorb the curve displacement left by the grid.

    Set ``n_bootstrap`` = 0 to skip standard errors.
    """
    if isinstance(data, Path):
        if data.kind != KIND_TARGP:
            raise DomainError(f"expected a TARGP path or a raw series, got {data.kind}")
        v = np.asarray(data.values, dtype=float)
    else:
        raw = np.asarray(data, dtype=float)
        v = np.where(raw > u, raw - u, 0.0)
    if u < 0.0:
        raise DomainError(f"threshold must be nonnegative, got {u}")
    if eps_f is None:
        eps_f = eps_grid

    exc = v[v > 0.0]
    if len(exc) < min_exceedances:
        raise InsufficientDataError(
            f"need at least {min_exceedances} exceedances, got {len(exc)}")

    gpd_u, loglik = mle_gpd(exc, min_count=min_exceedances)
    flags = []
    sigma0 = gpd_u.sigma - gpd_u.xi * u
    if sigma0 <= 0.0:
        raise EstimationError(
            f"implied base scale sigma(u) - xi*u = {sigma0:.6g} <= 0",
            diagnostics={"xi": gpd_u.xi, "sigma_u": gpd_u.sigma, "u": u})
    u_star = float(cdf(GpdParams(gpd_u.xi, sigma0), u))

    coarse = np.round(np.arange(grid_step, 1.0 + 1e-12, grid_step), 12)
    b0 = estimate_beta0(v, gpd_u, grid=coarse, eps_grid=eps_grid, u_star=u_star)
    fine = np.arange(b0 - 2.0 * grid_step, b0 + 2.0 * grid_step + 1e-12, grid_step / 5.0)
    fine = np.unique(np.clip(np.round(fine, 12), grid_step / 10.0, 1.0))
    b0 = estimate_beta0(v, gpd_u, grid=fine, eps_grid=eps_grid / 2.5, u_star=u_star)

    freq = frequency_stats(v, gpd_u, b0, eps_f, u_star=u_star)
    est = switch_estimates_from_freq(freq, u_star=u_star)
    if est.beta.clipped:
        flags.append("beta_clipped")
    if est.gamma.clipped:
        flags.append("gamma_clipped")

    se = None
    if n_bootstrap > 0:
        se, dropped = _bootstrap_se(v, u, gpd_u, b0, eps_f, n_bootstrap, seed,
                                    min_exceedances)
        if dropped:
            flags.append(f"bootstrap_dropped:{dropped}")

    return FitReport(gpd=gpd_u, sigma0=float(sigma0), u=float(u), u_star=u_star,
                     beta=est.beta, gamma=est.gamma, beta0=b0, freq=freq,
                     loglik=loglik, n=len(v), n_exceed=len(exc),
                     se=se, flags=tuple(flags))


def _bootstrap_se(v: np.ndarray, u: float, gpd_u: GpdParams, b0: float,
                  eps_f: float, n_bootstrap: int, seed: int,
                  min_exceedances: int) -> tuple[dict, int]:
    """Moving-block bootstrap standard errors (block length ceil(n^(1/3))).

    Resample fits are warm-started at the full-sample optimum; beta0 and
    the transition map are held fixed across resamples.
    """
    n = len(v)
    block = int(math.ceil(n ** (1.0 / 3.0)))
    rng = np.random.default_rng(seed)
    warm = (gpd_u.xi, gpd_u.sigma)
    rows = []
    dropped = 0
    for _ in range(n_bootstrap):
        idx = block_bootstrap_indices(n, block, rng)
        vb = v[idx]
        excb = vb[vb > 0.0]
        try:
            gb, _ = mle_gpd(excb, min_count=min_exceedances, warm=warm)
            s0b = gb.sigma - gb.xi * u
            if s0b <= 0.0:
                raise EstimationError("negative base scale in resample")
            usb = float(cdf(GpdParams(gb.xi, s0b), u))
            fb = frequency_stats(vb, gb, b0, eps_f, u_star=usb)
            eb = switch_estimates_from_freq(fb, u_star=usb)
        except (EstimationError, InsufficientDataError, DomainError):
            dropped += 1
            continue
        rows.append([gb.xi, gb.sigma, s0b, eb.beta.value, eb.gamma.value])
    if not rows:
        raise EstimationError("all bootstrap resamples failed")
    arr = np.asarray(rows)
    sd = arr.std(axis=0, ddof=1)
    keys = ["xi", "sigma_u", "sigma0", "beta", "gamma"]
    return {k: float(s) for k, s in zip(keys, sd)}, dropped
