"""Command-line front end.

    cdjet verify ex4.10
    cdjet shields --a dirichlet --b hardy --order 100000 --output json
    cdjet defect --alpha 1 --order 2 --mode exact
    cdjet curvature --kernel szego --x 0.0

Exit status: 0 success, 1 a verification claim failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import geometry, kernels, models, multipliers, shifts, verify
from .kernels import BivariateKernel, DiagonalKernel, KernelError, KernelFormatError
from .series import Mode, ModeError, format_scalar

KERNEL_NAMES = ("szego", "hardy", "bergman", "dirichlet", "hk:K", "mn:N", "fifth-power", "inverse-square",
                "augmented-quadratic", "offdiagonal")


class UsageError(Exception):
    pass


def parse_alpha(text: str) -> Fraction | float:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return value


def parse_grid(text: str) -> tuple[int, int]:
    try:
        r, t = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R,T (two integers), got {text!r}") from None
    if r < 1 or t < 1:
        raise argparse.ArgumentTypeError("grid counts must be positive")
    return r, t


def parse_rmax(text: str) -> float:
    x = float(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"--rmax must lie in (0, 1), got {text}")
    return x


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _alpha_for(mode: Mode, alpha):
    return alpha if mode is Mode.EXACT else float(alpha)


def resolve_kernel(name: str, order: int, mode: Mode, alpha=1) -> DiagonalKernel | BivariateKernel:
    base, _, param = name.partition(":")
    if base in ("szego", "hardy"):
        return kernels.szego_kernel(order, mode)
    if base == "bergman":
        return kernels.mn_kernel(2, order, mode)
    if base == "dirichlet":
        return kernels.dirichlet_kernel(_alpha_for(mode, Fraction(param) if param else alpha), order, mode)
    if base == "hk":
        return kernels.hk_kernel(_alpha_for(mode, Fraction(param or 1)), order, mode)
    if base == "mn":
        return kernels.mn_kernel(int(param or 1), order, mode)
    if base == "fifth-power":
        return models.fifth_power_kernel(order, mode)
    if base == "inverse-square":
        if mode is Mode.FLOAT:
            return models.harmonic_square_closed_form(order)
        return models.harmonic_square_kernel(order, mode)
    if base == "augmented-quadratic":
        return kernels.augmented_identity(kernels.PolyFactor.of(models.QUADRATIC, mode))
    if base == "offdiagonal":
        return models.offdiagonal_kernel(order) if mode is Mode.EXACT else models.offdiagonal_kernel_float(order)
    raise UsageError(f"unknown kernel {name!r}; choose from {', '.join(KERNEL_NAMES)}")


def _load_input(path: str) -> DiagonalKernel | BivariateKernel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return kernels.kernel_from_json(text)


def _kernel(args, flag: str = "kernel") -> DiagonalKernel | BivariateKernel:
    if args.input and flag == "kernel":
        return _load_input(args.input)
    name = getattr(args, flag)
    if name is None:
        raise UsageError(f"--{flag} or --input is required")
    return resolve_kernel(name, args.order, args.mode, args.alpha)


def _diagonal(args, flag: str = "kernel") -> DiagonalKernel:
    K = _kernel(args, flag)
    if not isinstance(K, DiagonalKernel):
        raise UsageError("this subcommand needs a diagonal kernel, got a bivariate one")
    return K


def _grid(args) -> geometry.GridSpec:
    radii, angles = args.grid
    return geometry.GridSpec.polar(radii, args.rmax, angles)


def _sequence_csv(header: str, values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", header])
    for n, v in enumerate(values):
        w.writerow([n, format_scalar(v) if not isinstance(v, float) else repr(v)])
    return buf.getvalue()


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    return value


# -- subcommands -------------------------------------------------------------
# each returns (json payload, csv text)


def cmd_kernel(args):
    K = _kernel(args)
    payload = json.loads(kernels.kernel_to_json(K))
    if isinstance(K, DiagonalKernel):
        return payload, _sequence_csv("a_n", list(K.coeffs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "n", "a_mn"])
    for m, n, v in K.nonzero():
        w.writerow([m, n, format_scalar(v)])
    return payload, buf.getvalue()


def cmd_weights(args):
    W = shifts.weights_from_kernel(_diagonal(args))
    values = W.weights.tolist()
    payload = {"kernel": W.source, "weights": values, "nonincreasing": W.is_nonincreasing()}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "weight"])
    for n, v in enumerate(values, start=1):
        w.writerow([n, repr(v)])
    return payload, buf.getvalue()


def cmd_shields(args):
    A = shifts.weights_from_kernel(_diagonal(args, "a"))
    B = shifts.weights_from_kernel(_diagonal(args, "b"))
    report = shifts.shields_ratio_extrema(A, B, bound=args.bound)
    payload = report.to_dict()
    rows = "\n".join(f"{k},{v}" for k, v in payload.items() if not isinstance(v, list))
    return payload, "key,value\n" + rows + "\n"


def cmd_defect(args):
    d = shifts.defect_coeffs(_alpha_for(args.mode, args.alpha), args.order, args.mode)
    payload = {"alpha": format_scalar(Fraction(args.alpha)), "b": [format_scalar(x) for x in d.b],
               "c": [format_scalar(x) for x in d.c], "identity_residual": d.identity_residual()}
    return payload, _sequence_csv("c_n", list(d.c))


def cmd_mueller(args):
    report = shifts.mueller_diagonal_check(_diagonal(args), _alpha_for(args.mode, args.alpha))
    return report.to_dict(), _sequence_csv("defect", list(report.defects))


def cmd_cofactor(args):
    report = shifts.cofactor_diagonal(_diagonal(args), _alpha_for(args.mode, args.alpha))
    payload = {"g": [format_scalar(x) for x in report.g], "negative_at": list(report.negative_at),
               "message": report.message}
    return payload, _sequence_csv("g_n", list(report.g))


def cmd_curvature(args):
    K = _diagonal(args).to_float()
    xs = args.x if args.x is not None else [0.0]
    values = np.atleast_1d(geometry.curvature_diagonal(K, np.array(xs))).tolist()
    payload = {"kernel": K.label, "x": xs, "curvature": values}
    body = "".join(f"{repr(x)},{repr(v)}\n" for x, v in zip(xs, values))
    return payload, "x,curvature\n" + body


def cmd_jet(args):
    G = _kernel(args)
    if G.mode is Mode.EXACT:
        G = G.to_float()
    grid = _grid(args)
    report = geometry.jet_condition_check(G, grid)
    trace = geometry.jet1_trace(G if isinstance(G, BivariateKernel) else G.coeffs, grid.points())
    return report.to_dict(), _grid_csv(args, grid, trace)


def cmd_ratio(args):
    KT = _kernel(args, "a").to_float()
    KS = _kernel(args, "b").to_float()
    grid = _grid(args)
    report = geometry.metric_ratio_extrema(KT, KS, grid)
    pts = grid.points()
    return report.to_dict(), _grid_csv(args, grid, geometry.metric_at(KT, pts) / geometry.metric_at(KS, pts))


def _grid_csv(args, grid, values) -> str:
    return geometry.heatmap_csv(grid, values) if args.heatmap else geometry.grid_csv(grid, values)


def cmd_multnorm(args):
    alpha = float(args.alpha)
    tol = 1e-8 if args.tolerance is None else args.tolerance
    norm = multipliers.mult_norm_bruteforce(args.poly, alpha, args.order, tol=tol)
    upper = multipliers.poly_mult_norm_upper(args.poly, alpha)
    payload = {"poly": args.poly, "alpha": alpha, "truncation": args.order, "bruteforce": norm, "upper": upper}
    return payload, f"bruteforce,upper\n{norm!r},{upper!r}\n"


def cmd_frame(args):
    family = (multipliers.fifth_power_family(args.terms) if args.family == "fifth-power"
              else multipliers.harmonic_family(args.terms))
    report = multipliers.frame_summability_check(family, float(args.alpha), _grid(args), args.delta)
    payload = {"rule": family.rule, **report.to_dict()}
    rows = "\n".join(f"{k},{v}" for k, v in payload.items())
    return payload, "key,value\n" + rows + "\n"


SUBCOMMANDS = {
    "kernel": (cmd_kernel, "coefficients of a named or JSON kernel"),
    "weights": (cmd_weights, "weighted-shift weights sqrt(a_{n-1}/a_n)"),
    "shields": (cmd_shields, "window-product extrema of two weight sequences"),
    "defect": (cmd_defect, "convolution inverse of (n+1)^-alpha"),
    "mueller": (cmd_mueller, "diagonal defects a_n - sum a_{n-s}/(s+1)^alpha"),
    "cofactor": (cmd_cofactor, "cofactor g with K = D_alpha * g"),
    "curvature": (cmd_curvature, "curvature of a diagonal kernel at x = |w|^2"),
    "jet": (cmd_jet, "grid check of c1 <= h < trace J1(h) <= c2"),
    "ratio": (cmd_ratio, "grid extrema of the metric ratio h_a / h_b"),
    "multnorm": (cmd_multnorm, "brute-force multiplier norm of a polynomial"),
    "frame": (cmd_frame, "frame summability of a monomial family"),
}


def _common(mode_default: str = "float") -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", type=int, default=None, help="truncation order N")
    p.add_argument("--alpha", type=parse_alpha, default=Fraction(1), help="Dirichlet exponent in (0, 1]")
    p.add_argument("--grid", type=parse_grid, default=None, metavar="R,T", help="radii and angle counts")
    p.add_argument("--rmax", type=parse_rmax, default=None, help="outermost grid radius")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=mode_default)
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--heatmap", action="store_true", help="grid CSV as a radius x angle matrix")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--input", metavar="FILE", help="kernel JSON file")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdjet", description="Kernel, shift and jet-bundle checks.")
    parser.add_argument("--show-config", action="store_true", help="print default tolerances and exit")
    sub = parser.add_subparsers(dest="command")

    v = sub.add_parser("verify", parents=[_common()], help="run the checks for a worked kernel")
    v.add_argument("example", choices=sorted(verify.REGISTRY))

    common = _common()
    for name, (_, help_text) in SUBCOMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("shields", "ratio"):
            p.add_argument("--a", required=True, help="first kernel name")
            p.add_argument("--b", required=True, help="second kernel name")
        else:
            p.add_argument("--kernel", help=f"kernel name: {', '.join(KERNEL_NAMES)}")
        if name == "shields":
            p.add_argument("--bound", type=float, default=verify.CONFIG["shields.bound"])
        if name == "curvature":
            p.add_argument("--x", type=parse_floats, help="comma-separated values of |w|^2")
        if name == "multnorm":
            p.add_argument("--poly", type=parse_floats, required=True, help="coefficients p_0,p_1,...")
        if name == "frame":
            p.add_argument("--family", choices=["fifth-power", "harmonic"], default="fifth-power")
            p.add_argument("--terms", type=int, default=64)
            p.add_argument("--delta", type=float, default=1.0)
    return parser


DEFAULT_ORDERS = {"kernel": 20, "weights": 20, "shields": 1000, "defect": 20, "mueller": 20, "cofactor": 20,
                  "curvature": 1000, "jet": 400, "ratio": 1000, "multnorm": 2000, "frame": 64}


def _emit(text: str, args) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_config:
        print(json.dumps({k: list(v) if isinstance(v, tuple) else v for k, v in verify.CONFIG.items()}, indent=2))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    args.mode = Mode(args.mode)
    if args.command == "verify":
        overrides = {}
        if args.order is not None:
            overrides[f"{args.example}.order"] = args.order
        if args.tolerance is not None and args.example == "ex4.91":
            overrides["ex4.91.tol"] = args.tolerance
        report = verify.verify_example(args.example, overrides)
        if args.output == "json":
            _emit(json.dumps(report.to_dict(), indent=2) + "\n", args)
        else:
            cell = lambda v: v if isinstance(v, str) else json.dumps(v)
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["label", "expected", "computed", "mode", "passed", "tolerance", "provenance"])
            for c in report.claims:
                d = c.to_dict()
                w.writerow([d["label"], cell(d["expected"]), cell(d["computed"]), d["mode"],
                            d["passed"], d["tolerance"], d["provenance"]])
            _emit(buf.getvalue(), args)
        return 0 if report.passed else 1

    if args.order is None:
        args.order = DEFAULT_ORDERS[args.command]
    if args.order < 0:
        parser.error("--order must be non-negative")
    if args.grid is None:
        args.grid = (int(verify.CONFIG["grid.radii"]), int(verify.CONFIG["grid.angles"]))
    if args.rmax is None:
        args.rmax = float(verify.CONFIG["grid.r_max"])
    handler = SUBCOMMANDS[args.command][0]
    payload, table = handler(args)
    if args.output == "json":
        _emit(json.dumps(_clean(payload), indent=2) + "\n", args)
    else:
        _emit(table, args)
    return 0


def main(argv: list[str] | None = None) -> None:
    try:
        code = run(argv)
    except KernelFormatError as exc:
        print(f"cdjet: input error: {exc}", file=sys.stderr)
        code = 2
    except multipliers.ConvergenceError as exc:
        print(f"cdjet: {exc}", file=sys.stderr)
        code = 1
    except (UsageError, KernelError, ModeError, ValueError, ArithmeticError) as exc:
        print(f"cdjet: error: {exc}", file=sys.stderr)
        code = 2
    sys.exit(code)
