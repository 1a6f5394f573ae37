"""Command-line interface: ``biasdyn {deriv,simulate,casestudy,classify}``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numeric or
validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bubbles import (
    CARRIER_PERIOD,
    accumulate_positive_periods,
    case_study_grid,
    case_study_states,
)
from .calculus import biased_derivative_series
from .exceptions import BiasdynError, SpecSyntaxError, ValidationError
from .integrators import ordinary_form, simulate_biased, simulate_reference
from .models import parse_model
from .plot import render_svg
from .regime import DEFAULT_DEADBAND, DEFAULT_DELTA, classify
from .serialize import format_float, read_csv, write_csv
from .signal import (
    Constant,
    ConstantValue,
    Harmonic,
    ProportionalToState,
    QuadraticInState,
    Step,
    TabulatedInput,
    Trajectory,
    Zero,
    make_grid,
    parse_real,
)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_BIAS_KINDS = {
    "constant": Constant,
    "state": ProportionalToState,
    "quadratic": QuadraticInState,
}


def parse_bias_spec(text):
    """``zero`` | ``constant:<c>`` | ``state:<k>`` | ``quadratic:<k>``."""
    text = text.strip()
    if text == "zero":
        return Zero()
    kind, sep, value = text.partition(":")
    if kind not in _BIAS_KINDS or not sep:
        raise SpecSyntaxError(kind, f"unknown bias spec {kind!r}; expected zero, constant:, state: or quadratic:")
    return _BIAS_KINDS[kind](parse_real(value, f"bias spec {text!r}"))


def parse_input_signal(text):
    """``step:<amp>`` | ``harmonic:<amp>,<omega>[,<phase>]`` | ``const:<v>`` | ``csv:<path>``.

    A ``csv:`` input is returned as a path; it is loaded once the grid is known.
    """
    kind, sep, rest = text.strip().partition(":")
    if not sep:
        raise SpecSyntaxError(kind, f"unknown input signal {kind!r}")
    if kind == "csv":
        return Path(rest)
    args = [parse_real(a, f"input signal {text!r}") for a in rest.split(",")]
    if kind == "step" and len(args) == 1:
        return Step(args[0], 0.0)
    if kind == "harmonic" and len(args) in (2, 3):
        return Harmonic(*args)
    if kind == "const" and len(args) == 1:
        return ConstantValue(args[0])
    raise SpecSyntaxError(kind, f"bad input signal {text!r}")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _real(text):
    try:
        return parse_real(text)
    except SpecSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = _Parser(prog="biasdyn", description="Biased-derivative dynamics toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("deriv", help="biased derivative of a sampled signal")
    p.add_argument("--input", required=True, help="CSV with columns t,<y>")
    p.add_argument("--bias", required=True, help="zero | constant:C | state:K | quadratic:K")
    p.add_argument("--output", required=True)
    p.add_argument("--with-signal", action="store_true",
                   help="write t,y,yodot (input for classify) instead of t,yodot")

    p = sub.add_parser("simulate", help="simulate a catalog model")
    p.add_argument("--model", required=True,
                   help="lag:K=,T= | logistic:sigma=,K= | predprey:e1=,e2=,g1=,g2=")
    p.add_argument("--input", default="const:0",
                   help="step:A | harmonic:A,OMEGA[,PHASE] | const:V | csv:PATH")
    p.add_argument("--t0", type=_real, default=0.0)
    p.add_argument("--dt", type=_real, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--y0", required=True, help="initial state, comma separated")
    p.add_argument("--output", required=True)
    p.add_argument("--method", choices=("biased-euler", "rk4"), default="biased-euler")

    p = sub.add_parser("casestudy", help="harmonic bubble case study")
    p.add_argument("--dt", type=_real, default=1e-3)
    p.add_argument("--periods", type=_real, default=1.0,
                   help="horizon in carrier periods (accumulation uses the first)")
    p.add_argument("--outdir", default=".")
    p.add_argument("--accumulation-mask", choices=("deriv", "signal"), default="deriv")
    p.add_argument("--marker-stride", type=_positive_int, default=None)

    p = sub.add_parser("classify", help="classify the bias regime of a (t,y,yodot) CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=_real, default=DEFAULT_DELTA)
    p.add_argument("--deadband", type=_real, default=DEFAULT_DEADBAND)
    return parser


def _cmd_deriv(args, out):
    bias = parse_bias_spec(args.bias)
    traj = read_csv(args.input)
    if len(traj.channels) != 1:
        raise ValidationError(f"{args.input}: expected one signal column, got {list(traj.channels)}")
    result = biased_derivative_series(traj, bias)
    if args.with_signal:
        result = Trajectory(
            result.grid, ("y", "yodot"),
            np.column_stack([traj.single()[:-1], result.single()]),
        )
    write_csv(result, args.output)


def _cmd_simulate(args, out):
    model = parse_model(args.model)
    sig = parse_input_signal(args.input)
    y0 = [parse_real(v, "--y0") for v in args.y0.split(",")]
    grid = make_grid(args.t0, args.dt, args.steps + 1)
    if isinstance(sig, Path):
        sig = TabulatedInput(read_csv(sig).rename("u"))
    if args.method == "rk4":
        traj = simulate_reference(ordinary_form(model, grid), sig, grid, y0)
    else:
        traj = simulate_biased(model, sig, grid, y0)
    write_csv(traj, args.output)
    final = ", ".join(f"{k}={format_float(v)}" for k, v in zip(traj.channels, traj.values[-1]))
    print(f"t={format_float(grid.t_end)} {final}", file=out)


def _cmd_casestudy(args, out):
    if not args.periods >= 1:
        raise ValidationError("--periods must be at least 1 (one full carrier period)")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    result = case_study_states(case_study_grid(args.dt, args.periods))
    result = accumulate_positive_periods(result, CARRIER_PERIOD, mask=args.accumulation_mask)
    write_csv(result.states, outdir / "states.csv")
    with open(outdir / "accumulation.csv", "w", newline="") as fh:
        fh.write("state,A,volume,radius\n")
        for acc in result.accumulations:
            fh.write(",".join([acc.state_name, format_float(acc.accumulation),
                               format_float(acc.sphere_volume),
                               format_float(acc.sphere_radius)]) + "\n")
    render_svg(result.states, outdir / "states.svg", marker_stride=args.marker_stride,
               title="biased derivatives of cos(t/2)")
    for acc in result.accumulations:
        print(f"{acc.state_name}: A={acc.accumulation:.6f} radius={acc.sphere_radius:.6f}",
              file=out)


def _cmd_classify(args, out):
    traj = read_csv(args.input)
    report = classify(traj, delta=args.delta, deadband=args.deadband)
    print(report.summary(), file=out)


_COMMANDS = {
    "deriv": _cmd_deriv,
    "simulate": _cmd_simulate,
    "casestudy": _cmd_casestudy,
    "classify": _cmd_classify,
}


def run_cli(argv=None, out=None, err=None):
    """Run one CLI invocation and return its exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args, out)
    except SystemExit as exc:
        # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (UsageError, SpecSyntaxError) as exc:
        print(f"biasdyn: usage error: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"biasdyn: I/O error: {exc}", file=err)
        return EXIT_IO
    except (BiasdynError, ArithmeticError) as exc:
        print(f"biasdyn: error: {exc}", file=err)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
