"""
Regenerate the bundled synthetic redemption fixture
===================================================

``data/synthetic_redemptions.csv`` is a simulated stand-in for a daily
fund-redemption history (real histories are proprietary): 3888 business
days starting 2000-08-22, generated from the censored process at the
benchmark parameter estimates.  Days at or below the threshold are recorded
as zero cashflow; exceedance days carry the full simulated amount.
"""

import os
from datetime import date, timedelta

import numpy as np

from argp import simulate_targp, targp_params

XI, SIGMA, BETA, GAMMA, U = 0.5538, 11488.0, 0.8619, 0.5778, 2168.0
N, SEED = 3888, 20000822

path = simulate_targp(targp_params(XI, SIGMA, BETA, GAMMA, U), N, seed=SEED)
cash = np.where(path.values > 0, path.values + U, 0.0)

days = []
d = date(2000, 8, 22)
while len(days) < N:
    if d.weekday() < 5:
        days.append(d)
    d += timedelta(days=1)

target = os.path.join(os.path.dirname(__file__), "..", "data",
                      "synthetic_redemptions.csv")
os.makedirs(os.path.dirname(target), exist_ok=True)
with open(target, "w", encoding="utf-8", newline="\n") as fh:
    fh.write("date,cashflow\n")
    for day, value in zip(days, cash):
        fh.write(f"{day.isoformat()},{value:.2f}\n")
print(f"wrote {os.path.normpath(target)} ({N} rows, seed {SEED})")
