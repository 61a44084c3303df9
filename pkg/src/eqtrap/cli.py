"""Command-line front end: parameter sweeps, bound checks and validation.

Subcommands emit deterministic CSV (default) or JSON; all physical inputs
are dimensionless ratios (detuning/omega, g/omega, beta*omega, gamma*t).
Exit codes: 0 success, 2 configuration error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import sweeps, validate
from .models import TwoBandParams

CONFIG_ERROR = 2
VALIDATION_ERROR = 3


def _fail_config(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return CONFIG_ERROR


def _parse_n_max(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--n-max must be 'auto' or an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("--n-max must be >= 1")
    return value


def _parse_float_list(text: str):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")
    return values


def _check_model(args, expected: str):
    if args.model != expected:
        return _fail_config(
            f"subcommand works on the {expected!r} model, got {args.model!r}")
    return None


def _range_grid(lo: float, hi: float, steps: int, log: bool = False):
    if steps < 1:
        return None
    if lo > hi:
        return None
    if log:
        if lo <= 0.0:
            return None
        return np.logspace(np.log10(lo), np.log10(hi), steps)
    return np.linspace(lo, hi, steps)


def _add_output_flags(parser):
    parser.add_argument("--out", default="-", help="output path ('-' = stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqtrap",
        description="Equilibration diagnostics for finite-dimensional "
                    "open quantum systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig1 = sub.add_parser("figure1", help="trapping vs detuning per temperature")
    fig1.add_argument("--model", default="jc",
                      choices=("jc", "two-band", "product-basis", "random"))
    fig1.add_argument("--g", type=float, default=1.0, help="g/omega")
    fig1.add_argument("--beta-omega", type=_parse_float_list,
                      default=[0.003, 0.005, 0.01],
                      help="comma-separated list of beta*omega values")
    fig1.add_argument("--delta-min", type=float, default=0.0)
    fig1.add_argument("--delta-max", type=float, default=10.0)
    fig1.add_argument("--steps", type=int, default=50)
    fig1.add_argument("--n-max", type=_parse_n_max, default=None,
                      help="'auto' (default) or explicit Fock cutoff")
    fig1.add_argument("--tol-tail", type=float, default=1e-10)
    _add_output_flags(fig1)

    fig2 = sub.add_parser("figure2",
                          help="trapping vs its correlation upper bound")
    fig2.add_argument("--model", default="jc",
                      choices=("jc", "two-band", "product-basis", "random"))
    fig2.add_argument("--g", type=float, default=1.0, help="g/omega")
    fig2.add_argument("--beta-omega", type=float, default=0.01)
    fig2.add_argument("--delta-min", type=float, default=0.0)
    fig2.add_argument("--delta-max", type=float, default=10.0)
    fig2.add_argument("--steps", type=int, default=50)
    fig2.add_argument("--n-max", type=_parse_n_max, default=None)
    fig2.add_argument("--tol-tail", type=float, default=1e-10)
    _add_output_flags(fig2)

    band = sub.add_parser("two-band", help="structured-bath traps and rates")
    band.add_argument("--model", default="two-band",
                      choices=("jc", "two-band", "product-basis", "random"))
    band.add_argument("--n1", type=int, default=100)
    band.add_argument("--n2", type=int, default=100)
    band.add_argument("--lambda", dest="coupling", type=float, default=0.01)
    band.add_argument("--band-width", type=float, default=1.0)
    band.add_argument("--gap", type=float, default=1.0)
    band.add_argument("--t-min", type=float, default=1e-5,
                      help="first gamma*t point (log grid)")
    band.add_argument("--t-max", type=float, default=1e5,
                      help="last gamma*t point (log grid)")
    band.add_argument("--steps", type=int, default=50)
    _add_output_flags(band)

    rnd = sub.add_parser("random-bound",
                         help="Monte-Carlo equilibration-bound trials")
    rnd.add_argument("--model", default="random",
                     choices=("jc", "two-band", "product-basis", "random"))
    rnd.add_argument("--d-s", type=int, default=2)
    rnd.add_argument("--d-b", type=int, default=20)
    rnd.add_argument("--trials", type=int, default=100)
    rnd.add_argument("--samples", type=int, default=2000)
    _add_output_flags(rnd)

    sub.add_parser("validate", help="run the cross-check suite")
    return parser


def cmd_figure1(args) -> int:
    err = _check_model(args, "jc")
    if err is not None:
        return err
    if not args.beta_omega:
        return _fail_config("empty --beta-omega list")
    if any(bw <= 0 for bw in args.beta_omega):
        return _fail_config("beta*omega values must be positive")
    grid = _range_grid(args.delta_min, args.delta_max, args.steps)
    if grid is None:
        return _fail_config("invalid detuning range (need steps >= 1 and min <= max)")
    rows = sweeps.figure1_rows(args.g, args.beta_omega, grid, args.n_max,
                               args.tol_tail)
    sweeps.write_rows(args.out, sweeps.FIGURE1_FIELDS, rows, args.format)
    return 0


def cmd_figure2(args) -> int:
    err = _check_model(args, "jc")
    if err is not None:
        return err
    if args.beta_omega <= 0:
        return _fail_config("beta*omega must be positive")
    grid = _range_grid(args.delta_min, args.delta_max, args.steps)
    if grid is None:
        return _fail_config("invalid detuning range (need steps >= 1 and min <= max)")
    rows = sweeps.figure2_rows(args.g, args.beta_omega, grid, args.n_max,
                               args.tol_tail)
    sweeps.write_rows(args.out, sweeps.FIGURE2_FIELDS, rows, args.format)
    return 0


def cmd_two_band(args) -> int:
    err = _check_model(args, "two-band")
    if err is not None:
        return err
    grid = _range_grid(args.t_min, args.t_max, args.steps, log=True)
    if grid is None:
        return _fail_config("invalid gamma*t range (need steps >= 1 and "
                            "0 < min <= max)")
    try:
        params = TwoBandParams(args.n1, args.n2, args.coupling,
                               args.band_width, args.gap)
    except ValueError as exc:
        return _fail_config(str(exc))
    rows = sweeps.two_band_rows(params, grid)
    sweeps.write_rows(args.out, sweeps.TWO_BAND_FIELDS, rows, args.format)
    return 0


def cmd_random_bound(args) -> int:
    err = _check_model(args, "random")
    if err is not None:
        return err
    if args.d_s < 2 or args.d_b < 2 or args.trials < 1 or args.samples < 1:
        return _fail_config("need d_s, d_b >= 2 and trials, samples >= 1")
    rows = sweeps.random_bound_rows(args.d_s, args.d_b, args.trials, args.seed,
                                    n_samples=args.samples)
    sweeps.write_rows(args.out, sweeps.RANDOM_BOUND_FIELDS, rows, args.format)
    return 0


def cmd_validate(_args) -> int:
    failures = validate.run_all()
    if failures:
        print("failing checks: " + ", ".join(failures), file=sys.stderr)
        return VALIDATION_ERROR
    return 0


COMMANDS = {
    "figure1": cmd_figure1,
    "figure2": cmd_figure2,
    "two-band": cmd_two_band,
    "random-bound": cmd_random_bound,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
