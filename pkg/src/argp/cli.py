"""Command-line front end: simulate paths, fit thresholded series, diagnose fits.

Subcommands
-----------
``argp simulate``
    Write a simulated path as a ``t,value`` CSV.  Byte-identical output for
    identical configuration and seed.
``argp fit``
    Ingest a ``date,cashflow`` CSV, fit the censored model at a given
    threshold, and emit the report as JSON.
``argp diagnose``
    Interarrival summaries per burn-in offset, marginal goodness-of-fit,
    and lagged PIT pairs, as plot-ready CSV files.

Exit codes: 0 ok, 2 invalid configuration, 3 input parse failure,
4 insufficient data.  ``--config FILE`` supplies defaults from a flat JSON
object keyed by option name; explicit flags win.  Relative output paths are
resolved against ``$ARGP_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from datetime import date

import numpy as np

from . import analytics, interarrival
from .errors import ArgpError, CsvFormatError, DomainError, InsufficientDataError
from .estimate import fit_pipeline, scale_at_threshold
from .gpd import GpdParams
from .simulate import (KIND_TARGP, ArgpParams, MargpParams, Path,
                       lagged_pairs, pit, simulate_argp, simulate_margp,
                       simulate_targp, targp_params, write_pairs_csv,
                       write_path_csv)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DATA = 4

OUTPUT_DIR_ENV = "ARGP_OUTPUT_DIR"

_NUMBER_RE = re.compile(r"^\d+(\.\d+)?([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class CashflowSeries:
    """Daily cashflow observations; zeros are meaningful and never dropped."""

    dates: tuple
    values: np.ndarray

    def __len__(self):
        return len(self.values)


def read_cashflow_csv(path) -> CashflowSeries:
    """Strict ``date,cashflow`` reader.

    ISO-8601 dates, strictly increasing; nonnegative decimal values with a
    period separator (thousands separators and locale formats rejected).
    Raises :class:`CsvFormatError` carrying the 1-based line number.
    """
    dates = []
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").rstrip("\r")
        if header != "date,cashflow":
            raise CsvFormatError(f"expected header 'date,cashflow', got {header!r}", line=1)
        prev = None
        for lineno, rawline in enumerate(fh, start=2):
            line = rawline.rstrip("\n").rstrip("\r")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvFormatError(f"expected 2 fields, got {len(parts)}", line=lineno)
            try:
                d = date.fromisoformat(parts[0])
            except ValueError:
                raise CsvFormatError(f"invalid ISO date {parts[0]!r}", line=lineno) from None
            if prev is not None and d <= prev:
                raise CsvFormatError(f"dates not strictly increasing at {parts[0]}", line=lineno)
            prev = d
            if not _NUMBER_RE.match(parts[1]):
                raise CsvFormatError(f"invalid cashflow value {parts[1]!r}", line=lineno)
            v = float(parts[1])
            if v < 0.0 or not np.isfinite(v):
                raise CsvFormatError(f"cashflow must be nonnegative, got {parts[1]}", line=lineno)
            dates.append(d)
            values.append(v)
    return CashflowSeries(tuple(dates), np.asarray(values, dtype=float))


def write_cashflow_csv(series: CashflowSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("date,cashflow\n")
        for d, v in zip(series.dates, series.values):
            fh.write(f"{d.isoformat()},{format(float(v), '.17g')}\n")


def read_value_csv(path) -> np.ndarray:
    """Reader for the ``t,value`` path exports."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").rstrip("\r")
        if header != "t,value":
            raise CsvFormatError(f"expected header 't,value', got {header!r}", line=1)
        for lineno, rawline in enumerate(fh, start=2):
            line = rawline.rstrip("\n").rstrip("\r")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvFormatError(f"expected 2 fields, got {len(parts)}", line=lineno)
            try:
                values.append(float(parts[1]))
            except ValueError:
                raise CsvFormatError(f"invalid value {parts[1]!r}", line=lineno) from None
    return np.asarray(values, dtype=float)


def _sniff_header(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.readline().rstrip("\n").rstrip("\r")


def _resolve_out(pathlike: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(pathlike):
        return os.path.join(base, pathlike)
    return pathlike


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    if args.n < 1:
        raise DomainError(f"--n must be >= 1, got {args.n}")
    gpd = GpdParams(args.xi, args.sigma)
    model = args.model
    x0_mode = "fixed" if args.x0 is not None else "stationary"
    if model == "argp":
        if args.gamma is not None and args.gamma != 1.0:
            raise DomainError("--gamma applies to margp/targp models only")
        path = simulate_argp(ArgpParams(gpd, args.beta), args.n, args.seed,
                             x0_mode=x0_mode, x0=args.x0)
    elif model == "margp":
        if args.gamma is None:
            raise DomainError("--gamma is required for model margp")
        path = simulate_margp(MargpParams(ArgpParams(gpd, args.beta), args.gamma),
                              args.n, args.seed, x0_mode=x0_mode, x0=args.x0)
    elif model == "targp":
        if args.gamma is None:
            raise DomainError("--gamma is required for model targp")
        if args.u is None:
            raise DomainError("--u is required for model targp")
        path = simulate_targp(targp_params(args.xi, args.sigma, args.beta, args.gamma, args.u),
                              args.n, args.seed, x0_mode=x0_mode, x0=args.x0)
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown model {model!r}")
    out = _resolve_out(args.out)
    write_path_csv(path, out)
    return EXIT_OK


def cmd_fit(args) -> int:
    series = read_cashflow_csv(args.input)
    report = fit_pipeline(series.values, args.u, n_bootstrap=args.bootstrap,
                          seed=args.seed, eps_grid=args.eps_grid,
                          eps_f=args.eps_f)
    text = report.to_json()
    if args.out:
        with open(_resolve_out(args.out), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _load_diagnose_series(args) -> np.ndarray:
    # t,value exports are already on the exceedance scale; raw cashflow
    # files are truncated at the threshold here
    header = _sniff_header(args.input)
    if header == "t,value":
        return read_value_csv(args.input)
    series = read_cashflow_csv(args.input)
    return np.where(series.values > args.u, series.values - args.u, 0.0)


def cmd_diagnose(args) -> int:
    if args.u < 0:
        raise DomainError(f"--u must be nonnegative, got {args.u}")
    gpd0 = GpdParams(args.xi, args.sigma)
    v = _load_diagnose_series(args)
    offsets = _parse_offsets(args.offsets)
    outdir = _resolve_out(args.out_dir)
    os.makedirs(outdir, exist_ok=True)

    rows = []
    for off in offsets:
        sample = interarrival.extract_gaps(v, offset=off)
        if len(sample.gaps) == 0:
            continue
        rows.append((off, interarrival.gap_summary(sample)))
    interarrival.write_gap_summary_csv(rows, os.path.join(outdir, "interarrival_summary.csv"))

    spec = scale_at_threshold(gpd0, args.u)
    exceed = v[v > 0.0]
    gof_rows = [("n", len(v)), ("n_exceed", len(exceed))]
    if len(exceed) > 0:
        gof = analytics.gof_marginal(exceed, GpdParams(gpd0.xi, spec.sigma_u))
        gof_rows.append(("ks_distance", format(gof.distance, ".17g")))
        for i, c in enumerate(gof.pit_hist):
            gof_rows.append((f"pit_hist_{i:02d}", int(c)))
    with open(os.path.join(outdir, "gof.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric,value\n")
        for k, val in gof_rows:
            fh.write(f"{k},{val}\n")

    path = Path(values=v, kind=KIND_TARGP, seed=0)
    pp = pit(path, gpd0, u=args.u)
    write_pairs_csv(lagged_pairs(pp), os.path.join(outdir, "pp_pairs.csv"))
    return EXIT_OK


def _parse_offsets(text: str | None) -> list[int]:
    if text is None:
        return list(interarrival.OFFSET_PRESETS)
    items = [t for t in text.split(",") if t.strip() != ""]
    if not items:
        return [0]
    try:
        offsets = sorted({int(t) for t in items})
    except ValueError:
        raise DomainError(f"offsets must be integers, got {text!r}") from None
    if any(o < 0 for o in offsets):
        raise DomainError("offsets must be nonnegative")
    return offsets


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="argp", description=__doc__.split("\n")[0])
    top.add_argument("--config", help="flat JSON file with option defaults")
    sub = top.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="simulate a path and write t,value CSV")
    ps.add_argument("--model", choices=["argp", "margp", "targp"], required=True)
    ps.add_argument("--xi", type=float, required=True)
    ps.add_argument("--sigma", type=float, required=True)
    ps.add_argument("--beta", type=float, required=True)
    ps.add_argument("--gamma", type=float, default=None)
    ps.add_argument("--u", type=float, default=None)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--x0", type=float, default=None,
                    help="fixed start value (default: stationary draw)")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_simulate)

    pf = sub.add_parser("fit", help="fit a date,cashflow CSV at a known threshold")
    pf.add_argument("--input", required=True)
    pf.add_argument("--u", type=float, required=True)
    pf.add_argument("--bootstrap", type=int, default=500,
                    help="bootstrap resamples for standard errors (0 disables)")
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--eps-grid", type=float, default=0.01)
    pf.add_argument("--eps-f", type=float, default=None)
    pf.add_argument("--out", default=None, help="report path (default: stdout)")
    pf.set_defaults(func=cmd_fit)

    pd = sub.add_parser("diagnose", help="interarrival/GoF/PP diagnostics")
    pd.add_argument("--input", required=True,
                    help="date,cashflow CSV or t,value path CSV")
    pd.add_argument("--xi", type=float, required=True)
    pd.add_argument("--sigma", type=float, required=True,
                    help="base scale of the uncensored marginal")
    pd.add_argument("--beta", type=float, required=True)
    pd.add_argument("--gamma", type=float, default=1.0)
    pd.add_argument("--u", type=float, required=True)
    pd.add_argument("--offsets", default=None,
                    help="comma-separated burn-in offsets "
                         "(default: 0,252,504,756,1008,1260; empty string: 0)")
    pd.add_argument("--out-dir", default=".")
    pd.set_defaults(func=cmd_diagnose)
    return top


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # peel --config off first so its values become defaults, then reparse
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        try:
            with open(known.config, "r", encoding="utf-8") as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise DomainError(f"cannot read config {known.config}: {e}") from None
        if not isinstance(conf, dict):
            raise DomainError("config must be a flat JSON object")
        explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
        for key, value in conf.items():
            attr = key.replace("-", "_")
            if attr in explicit or not hasattr(args, attr):
                continue
            setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except CsvFormatError as e:
        print(f"argp: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except InsufficientDataError as e:
        print(f"argp: insufficient data: {e}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, ArgpError, ValueError) as e:
        print(f"argp: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
