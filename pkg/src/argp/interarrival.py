"""Interarrival times between threshold exceedances of a censored path.

On an exceedance day t, the interarrival time is the number of censored
days before the next exceedance:

    L_t = inf{h > 0 : V_{t+h} > 0} - 1

The exceedance indicator of a TARGP path is a two-state Markov chain with
stay probabilities pi0 = P(V_t = 0 | V_{t-1} = 0) and
pi1 = P(V_t > 0 | V_{t-1} > 0), so L_t is a mixture of a point mass at 0
(weight pi1) and a geometric law with parameter 1 - pi0:

    P(L = 0) = pi1,   P(L = k) = (1 - pi1)(1 - pi0) pi0^(k-1),  k >= 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError
from .simulate import KIND_TARGP, Path, TargpParams

#: trading-day offsets spanning one to five years
OFFSET_PRESETS = (0, 252, 504, 756, 1008, 1260)


@dataclass(frozen=True)
class InterarrivalLaw:
    pi0: float
    pi1: float

    def __post_init__(self):
        for name in ("pi0", "pi1"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class InterarrivalSample:
    gaps: np.ndarray
    offset: int


@dataclass(frozen=True)
class GapSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int


def law_from_params(p: TargpParams) -> InterarrivalLaw:
    """Stay probabilities of the exceedance chain from process parameters.

    With bb = 1-beta, gb = 1-gamma, ub = 1-u*:

        pi1 = 1 - (1 - beta*gamma) u*
        pi0 = gb u* + gamma (beta + bb^2 u* ub) / (beta + bb ub)
    """
    beta, gamma, ustar = p.beta, p.gamma, p.u_star
    bb = 1.0 - beta
    gb = 1.0 - gamma
    ub = 1.0 - ustar
    pi1 = 1.0 - (1.0 - beta * gamma) * ustar
    pi0 = gb * ustar + gamma * (beta + bb * bb * ustar * ub) / (beta + bb * ub)
    return InterarrivalLaw(pi0=float(pi0), pi1=float(pi1))


def pmf(law: InterarrivalLaw, k) -> np.ndarray | float:
    """P(L = k) for nonnegative integer k (vectorized)."""
    ka = np.asarray(k)
    if np.any(ka < 0):
        raise DomainError("k must be nonnegative")
    out = np.where(
        ka == 0,
        law.pi1,
        (1.0 - law.pi1) * (1.0 - law.pi0) * law.pi0 ** np.maximum(ka - 1, 0),
    )
    return out if out.ndim else float(out)


def mean_var(law: InterarrivalLaw) -> tuple[float, float]:
    """Mean (1-pi1)/(1-pi0) and variance (1-pi1)(pi0+pi1)/(1-pi0)^2."""
    if law.pi1 == 1.0:
        return 0.0, 0.0
    if law.pi0 >= 1.0:
        raise DomainError("pi0 = 1 gives an infinite mean interarrival time")
    m = (1.0 - law.pi1) / (1.0 - law.pi0)
    v = (1.0 - law.pi1) * (law.pi0 + law.pi1) / (1.0 - law.pi0) ** 2
    return float(m), float(v)


def extract_gaps(path: Path | np.ndarray, offset: int = 0) -> InterarrivalSample:
    """Observed interarrival times after dropping the first ``offset`` steps.

    For each exceedance that has a later exceedance, the count of censored
    steps in between is recorded; the trailing open-ended run is discarded.
    Fewer than two exceedances give an empty sample, not an error.
    """
    if isinstance(path, Path):
        if path.kind != KIND_TARGP:
            raise DomainError(f"interarrival extraction needs a TARGP path, got {path.kind}")
        values = path.values
    else:
        values = np.asarray(path, dtype=float)
    if offset < 0 or offset >= len(values):
        raise DomainError(f"offset must lie in [0, {len(values) - 1}], got {offset}")
    idx = np.flatnonzero(values[offset:] > 0.0)
    if len(idx) < 2:
        return InterarrivalSample(np.empty(0, dtype=np.int64), offset)
    return InterarrivalSample(np.diff(idx) - 1, offset)


def gap_summary(sample: InterarrivalSample) -> GapSummary:
    """Five-number summary plus mean; see :func:`five_number_summary`."""
    if len(sample.gaps) == 0:
        raise InsufficientDataError("empty interarrival sample")
    lo, q1, med, q3, hi = five_number_summary(sample.gaps)
    return GapSummary(lo, q1, med, q3, hi, float(np.mean(sample.gaps)), len(sample.gaps))


def five_number_summary(values) -> tuple[float, float, float, float, float]:
    """(min, Q1, median, Q3, max) with linearly interpolated quartiles.

    The interpolation rule is fixed so summaries are bit-reproducible and
    comparable between data and simulations.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InsufficientDataError("empty sample")
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75], method="linear")
    return float(v.min()), float(q1), float(med), float(q3), float(v.max())


def write_gap_summary_csv(rows, file) -> None:
    """Write ``offset,min,q1,median,q3,max,mean,count`` rows.

    ``rows`` is an iterable of (offset, GapSummary).
    """
    own = isinstance(file, (str, bytes, os.PathLike))
    fh = open(file, "w", encoding="utf-8", newline="\n") if own else file
    try:
        fh.write("offset,min,q1,median,q3,max,mean,count\n")
        for offset, s in rows:
            fields = [str(int(offset))] + [format(x, ".17g") for x in
                                           (s.min, s.q1, s.median, s.q3, s.max, s.mean)]
            fh.write(",".join(fields) + f",{s.count}\n")
    finally:
        if own:
            fh.close()
