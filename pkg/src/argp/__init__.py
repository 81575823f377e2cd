"""Time-series models with generalized Pareto marginals.

The family: an autoregressive recursion whose stationary marginal is a
generalized Pareto distribution (ARGP), a switch-modified variant that
also allows stochastic increases (MARGP), and its censored version for
series with exact zeros (TARGP).  The package provides exact simulation,
closed-form interarrival analytics for exceedances, lag-1 moment and
goodness-of-fit diagnostics, and the full parameter-estimation pipeline
with block-bootstrap standard errors.
"""

from .analytics import (BoxSummary, GofResult, LagOneStats, box_summary,
                        gof_marginal, h2, lag_one_stats)
from .dynamics import f_gpd, f_iterate, f_star, f_star_inv
from .errors import (ArgpError, CsvFormatError, DomainError, EstimationError,
                     InsufficientDataError)
from .estimate import (ClippedEstimate, FitReport, FreqStats, SwitchEstimates,
                       ThresholdSpec, estimate_beta0, estimate_beta_argp,
                       estimate_margp, estimate_targp, fit_pipeline,
                       frequency_stats, mle_gpd, scale_at_threshold,
                       switch_estimates_from_freq)
from .gpd import (GpdParams, Support, cdf, log_density, moment,
                  moment_quadrature, quantile, sample)
from .interarrival import (InterarrivalLaw, InterarrivalSample, GapSummary,
                           extract_gaps, gap_summary, law_from_params,
                           mean_var, pmf, write_gap_summary_csv)
from .simulate import (ArgpParams, MargpParams, Path, PitPath, TargpParams,
                       lagged_pairs, pit, simulate_argp, simulate_margp,
                       simulate_targp, targp_params, write_pairs_csv,
                       write_path_csv)

__version__ = "0.1.0"

__all__ = [
    "ArgpError", "ArgpParams", "BoxSummary", "ClippedEstimate",
    "CsvFormatError", "DomainError", "EstimationError", "FitReport",
    "FreqStats", "GapSummary", "GofResult", "GpdParams", "InsufficientDataError",
    "InterarrivalLaw", "InterarrivalSample", "LagOneStats", "MargpParams",
    "Path", "PitPath", "Support", "SwitchEstimates", "TargpParams",
    "ThresholdSpec", "box_summary", "cdf", "estimate_beta0",
    "estimate_beta_argp", "estimate_margp", "estimate_targp", "extract_gaps",
    "f_gpd", "f_iterate", "f_star", "f_star_inv", "fit_pipeline",
    "frequency_stats", "gap_summary", "gof_marginal", "h2", "lag_one_stats",
    "lagged_pairs", "law_from_params", "log_density", "mean_var", "mle_gpd",
    "moment", "moment_quadrature", "pit", "pmf", "quantile", "sample",
    "scale_at_threshold", "simulate_argp", "simulate_margp", "simulate_targp",
    "switch_estimates_from_freq", "targp_params", "write_gap_summary_csv",
    "write_pairs_csv", "write_path_csv",
]
