"""
The estimation pipeline end to end
==================================

Simulate a censored series at known parameters, then recover them with the
two-stage fit: likelihood for the marginal pair on the exceedances, a grid
scan for the preliminary switch probability, then the transition-frequency
estimators with moving-block bootstrap standard errors.
"""

import numpy as np

from argp import fit_pipeline, simulate_targp, targp_params

XI, SIGMA, BETA, GAMMA, U = 0.5538, 11488.0, 0.8619, 0.5778, 2168.0
SIGMA_U = SIGMA + XI * U

targp = targp_params(XI, SIGMA, BETA, GAMMA, U)
path = simulate_targp(targp, 3888, seed=20)

report = fit_pipeline(path, U, n_bootstrap=500, seed=1)
print(report.to_json())

truth = {"xi": XI, "sigma_u": SIGMA_U, "sigma0": SIGMA, "beta": BETA, "gamma": GAMMA}
est = {"xi": report.gpd.xi, "sigma_u": report.gpd.sigma, "sigma0": report.sigma0,
       "beta": report.beta.value, "gamma": report.gamma.value}
print("\nparameter   truth        estimate     se")
for k in truth:
    print(f"{k:<10}  {truth[k]:<11.4f}  {est[k]:<11.4f}  {report.se[k]:.4f}")

# A small repetition study shows the sampling spread at this series length.
# Note the switch estimators carry a small systematic offset: the recursion
# can land strictly between the previous value and its image (an increase
# that is not on the curve), which the frequency identities behind the
# estimators do not account for.
reps = 20
errs = {k: [] for k in ("xi", "beta", "gamma")}
for rep in range(reps):
    p = simulate_targp(targp, 3888, seed=100 + rep)
    r = fit_pipeline(p, U, n_bootstrap=0)
    errs["xi"].append(r.gpd.xi - XI)
    errs["beta"].append(r.beta.value - BETA)
    errs["gamma"].append(r.gamma.value - GAMMA)

print(f"\nerrors over {reps} repetitions (n = 3888):")
for k, v in errs.items():
    print(f"  {k:<6} mean {np.mean(v):+.4f}   sd {np.std(v):.4f}")
