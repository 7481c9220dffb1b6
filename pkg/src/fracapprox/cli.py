"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings

import numpy as np

from . import caputo, harness, relaxation, subdiffusion
from .errors import DomainError
from .weights import Scheme, scheme_weights

SCHEMES = [s.value for s in Scheme]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _md_text(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(v) for v in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _table(header, rows, fmt: str) -> str:
    if fmt == "md":
        return _md_text(header, rows)
    return _csv_text(header, rows)


def cmd_weights(args) -> None:
    wv = scheme_weights(args.scheme, args.alpha, args.n)
    rows = [(k, f"{w:.17g}") for k, w in enumerate(wv.weights)]
    _emit(_table(["k", "w_k"], rows, args.format), args.out)


def cmd_caputo(args) -> None:
    approx = caputo.approximate(args.scheme, args.function, args.alpha, args.x, args.n)
    exact = caputo.exact_caputo(args.function, args.alpha, args.x)
    text = f"approximation {approx:.16g}\nexact {exact:.16g}\nerror {abs(approx - exact):.6e}\n"
    _emit(text, args.out)


def cmd_relax(args) -> None:
    p = relaxation.builtin_problem(args.equation, args.alpha)
    M = harness._steps(args.t_final, args.h)
    traj = relaxation.solve(p, args.scheme, args.h, M)
    err = relaxation.max_error(traj, p.exact)
    _emit(f"max_error {err:.6e}\n", args.out)
    if args.emit_trajectory:
        x = traj.x
        exact = np.array([p.exact(v) for v in x])
        rows = [(f"{a:.17g}", f"{u:.17g}", f"{e:.17g}", f"{abs(u - e):.6e}") for a, u, e in zip(x, traj.values, exact)]
        _emit(_csv_text(["x", "u", "exact", "error"], rows), args.emit_trajectory)


def cmd_subdiff(args) -> None:
    M = args.steps
    grid = subdiffusion.SpaceTimeGrid(M, M)
    if args.regularize_m is not None:
        if args.example != "2":
            raise DomainError("--regularize-m applies to example 2 only")
        problem, recover = subdiffusion.regularize_example_2(args.alpha, args.regularize_m)
    else:
        problem = harness.subdiffusion_problem(args.example, args.alpha)
        recover = None
    res = subdiffusion.solve(problem, args.alpha, grid)
    _emit(f"max_error {res.error:.6e}\n", args.out)
    if args.emit_field:
        U, exact = res.U, res.exact
        if recover is not None:
            U, exact = recover(res.x, grid.T, U), recover(res.x, grid.T, exact)
        rows = [(f"{a:.17g}", f"{u:.17g}", f"{e:.17g}", f"{abs(u - e):.6e}") for a, u, e in zip(res.x, U, exact)]
        _emit(_csv_text(["x", "U", "exact", "error"], rows), args.emit_field)


def cmd_converge(args) -> None:
    task = harness.Task.parse(args.task)
    if task is harness.Task.RELAX:
        problem, x = args.equation, args.t_final
    elif task is harness.Task.SUBDIFF:
        problem, x = args.example, 1.0
    else:
        problem, x = args.function, args.x
    spec = harness.RefinementSpec(
        task=task,
        problem=problem,
        alpha=args.alpha,
        h_start=args.h_start,
        levels=args.levels,
        scheme=args.scheme,
        regularize_m=args.regularize_m,
        x=x,
    )
    _emit(harness.render(harness.run_refinement(spec), args.format), args.out)


def cmd_coeffs(args) -> None:
    grid = np.linspace(args.alpha_min, args.alpha_max, args.num)
    text = harness.coefficient_curve(harness.COEFF_SCHEMES, grid)
    if args.format == "md":
        rows = [line.split(",") for line in text.strip().splitlines()]
        text = _md_text(rows[0], rows[1:])
    _emit(text, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracapprox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme_default="MID_SIGMA", alpha_required=True):
        p.add_argument("--alpha", type=float, required=alpha_required, default=None if alpha_required else 0.5)
        p.add_argument("--scheme", type=str.upper, choices=SCHEMES, default=scheme_default)
        p.add_argument("--format", choices=["csv", "md"], default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("weights", help="print the weights w_0..w_n of a scheme")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("caputo", help="approximate the Caputo derivative of a test function")
    common(p)
    p.add_argument("--function", type=str.upper, choices=[f.value for f in caputo.TestFunction], required=True)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_caputo)

    p = sub.add_parser("relax", help="solve a built-in fractional relaxation equation")
    common(p)
    p.add_argument("--equation", type=str.upper, choices=["I", "II", "III", "CONST"], required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--emit-trajectory", default=None, metavar="PATH")
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("subdiff", help="solve a built-in subdiffusion example (tau = h)")
    common(p)
    p.add_argument("--example", choices=["1", "2"], required=True)
    p.add_argument("--steps", type=int, required=True, help="M = N, so tau = h = 1/M")
    p.add_argument("--regularize-m", type=int, default=None)
    p.add_argument("--emit-field", default=None, metavar="PATH")
    p.set_defaults(func=cmd_subdiff)

    p = sub.add_parser("converge", help="grid-refinement study with observed orders")
    common(p)
    p.add_argument("--task", type=str.lower, choices=["relax", "subdiff", "caputo"], required=True)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--h-start", type=float, required=True)
    p.add_argument("--equation", type=str.upper, choices=["I", "II", "III", "CONST"], default="I")
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--example", choices=["1", "2"], default="1")
    p.add_argument("--regularize-m", type=int, default=None)
    p.add_argument("--function", type=str.upper, choices=[f.value for f in caputo.TestFunction], default="POLY4")
    p.add_argument("--x", type=float, default=1.0)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("coeffs", help="|C1|, |C8|, |C9|, |C10| on an alpha grid")
    p.add_argument("--alpha-min", type=float, default=0.01)
    p.add_argument("--alpha-max", type=float, default=0.99)
    p.add_argument("--num", type=int, default=99)
    p.add_argument("--format", choices=["csv", "md"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_coeffs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
