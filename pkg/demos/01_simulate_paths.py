"""
Simulating the three processes
==============================

One family, three layers: the base recursion climbs deterministically along
the transition map f and crashes via a competing fresh draw (ARGP); a second
switch occasionally replaces the value outright, so upward jumps off the
curve become possible (MARGP); censoring at a threshold turns quiet days
into exact zeros (TARGP).
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from argp import (ArgpParams, GpdParams, MargpParams, lagged_pairs, pit,
                  simulate_argp, simulate_margp, simulate_targp, targp_params)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# benchmark parameters of a fitted redemption series
XI, SIGMA, BETA, GAMMA, U = 0.5538, 11488.0, 0.8619, 0.5778, 2168.0

g = GpdParams(XI, SIGMA)
argp = ArgpParams(g, BETA)
margp = MargpParams(argp, GAMMA)
targp = targp_params(XI, SIGMA, BETA, GAMMA, U)

n = 1500
paths = {
    "ARGP": simulate_argp(argp, n, seed=7),
    "MARGP": simulate_margp(margp, n, seed=7),
    "TARGP": simulate_targp(targp, n, seed=7),
}

fig, axes = plt.subplots(3, 1, figsize=(10, 7), sharex=True)
for ax, (name, path) in zip(axes, paths.items()):
    ax.plot(path.values, lw=0.6)
    ax.set_ylabel(name)
    ax.set_yscale("symlog", linthresh=1e3)
axes[-1].set_xlabel("t")
fig.suptitle("Same random stream, three model layers")
fig.savefig(os.path.join(OUT, "paths.png"), dpi=120)

# The lagged PP plot shows the dependence structure on the copula scale.
# For the ARGP the region above the curve u -> f*(u) stays empty: increases
# can never overshoot the transition map.  The MARGP puts mass up there.
from argp import f_star

grid = np.linspace(0.0, 1.0, 400)
fig, axes = plt.subplots(1, 2, figsize=(10, 5), sharey=True)
for ax, name in zip(axes, ("ARGP", "MARGP")):
    long_path = {
        "ARGP": simulate_argp(argp, 8000, seed=11),
        "MARGP": simulate_margp(margp, 8000, seed=11),
    }[name]
    pairs = lagged_pairs(pit(long_path, g))
    ax.plot(pairs[:, 0], pairs[:, 1], ".", ms=1.2, alpha=0.4)
    ax.plot(grid, np.asarray(f_star(BETA, grid)), "r-", lw=1, label="f*")
    ax.plot(grid, grid, "k--", lw=0.7, label="identity")
    ax.set_title(f"{name}: lagged PP pairs")
    ax.set_xlabel("G(X_{t-1})")
    ax.legend(loc="lower right")
axes[0].set_ylabel("G(X_t)")
fig.savefig(os.path.join(OUT, "pp_pairs.png"), dpi=120)

print("wrote", os.path.join(OUT, "paths.png"))
print("wrote", os.path.join(OUT, "pp_pairs.png"))
