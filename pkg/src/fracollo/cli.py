"""``fracollo`` command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 validation or solvability failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .bspline import eval_basis, eval_basis_derivative, make_basis
from .collocation import (
    BvpProblem,
    ConvergenceRow,
    SolvabilityError,
    assemble,
    check_solvability,
    convergence_study,
    error_grid,
    error_inf_norm,
    grid_points,
    solve_system,
)
from .expression import Expression, ExpressionError
from .fracderiv import caputo_basis, caputo_oracle
from .problemio import (
    EXAMPLE_GAMMAS,
    ProblemFileError,
    example_data,
    load_example,
    load_problem,
)
from .quasiinterp import eval_spline
from .specfun import FractionalOrder

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2
PAPER_H_LIST = (2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6)


class ValidationError(Exception):
    """Bad arguments or configuration; maps to exit code 2."""


def fmt(value: Optional[float]) -> str:
    """17 significant digits, empty for missing values."""
    return "" if value is None else format(value, ".17g")


def parse_number(text: str) -> float:
    """Numeric argument; accepts constant expressions such as ``1/8`` or ``2^-3``."""
    try:
        value = Expression(text)(math.nan)
    except ExpressionError as exc:
        raise ValidationError(f"cannot read number {text!r}: {exc}") from exc
    if not math.isfinite(value):
        raise ValidationError(f"{text!r} is not a finite constant")
    return value


def parse_list(text: str) -> list[float]:
    return [parse_number(part) for part in text.split(",") if part.strip()]


def parse_int_list(text: str) -> list[int]:
    out = []
    for v in parse_list(text):
        if v != int(v):
            raise ValidationError(f"expected integers, got {v!r}")
        out.append(int(v))
    return out


def h_label(h: float) -> str:
    k = -math.log2(h)
    if k == int(k):
        return f"2^-{int(k)}"
    return fmt(h)


@contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def _check_config(problem: BvpProblem, n: int, h: float, delta: float):
    try:
        basis = make_basis(n, h, problem.length)
    except ValueError as exc:
        raise ValidationError(f"invalid basis for n={n}, h={fmt(h)}: {exc}") from exc
    try:
        status = check_solvability(basis, problem.order, delta)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if not status:
        raise ValidationError(
            f"solvability violated for n={n}, h={fmt(h)}, delta={fmt(delta)}: {status.describe()}"
        )
    if not problem.order.gamma < n:
        raise ValidationError(f"need gamma < n, got gamma={problem.order.gamma}, n={n}")
    return basis


def _load(path: str) -> BvpProblem:
    return load_problem(path)


# --- solve -----------------------------------------------------------------


def run_solve(problem: BvpProblem, n: int, h: float, delta: float, eta: int,
              condition: bool, boundary_weight: float, out: Optional[str]) -> dict:
    basis = _check_config(problem, n, h, delta)
    system = assemble(problem, basis, delta, boundary_weight)
    sol = solve_system(system)
    xs = error_grid(problem.length, delta, eta)
    approx = eval_spline(sol, xs)
    exact = problem.exact_solution
    summary = {"rows": system.matrix.shape[0], "cols": system.matrix.shape[1]}
    with _output(out) as stream:
        w = _writer(stream)
        if exact is None:
            w.writerow(["x", "y_approx"])
            for x, y in zip(xs, approx):
                w.writerow([fmt(x), fmt(y)])
        else:
            w.writerow(["x", "y_approx", "y_exact", "abs_err"])
            for x, y in zip(xs, approx):
                ye = float(exact(float(x)))
                w.writerow([fmt(x), fmt(y), fmt(ye), fmt(abs(ye - y))])
    if exact is not None:
        summary["error_inf"] = error_inf_norm(sol, exact, delta, eta)
    if condition:
        summary["kappa"] = linalg.condition_number(system.matrix)
    return summary


def cmd_solve(args) -> int:
    problem = _load(args.problem)
    summary = run_solve(problem, args.degree, parse_number(args.h), parse_number(args.delta),
                        args.eta, args.condition, args.boundary_weight, args.out)
    # CSV owns stdout when no --out is given
    report = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"system: {summary['rows']} x {summary['cols']}", file=report)
    if "error_inf" in summary:
        print(f"error_inf: {summary['error_inf']:.6e}", file=report)
    if "kappa" in summary:
        print(f"kappa: {summary['kappa']:.6e}", file=report)
    return EXIT_OK


# --- convergence -----------------------------------------------------------


def run_convergence(problem: BvpProblem, degrees: Sequence[int], h_list: Sequence[float],
                    delta_ratio: float, eta: int) -> dict[int, list[ConvergenceRow]]:
    if problem.exact_solution is None:
        raise ValidationError("convergence study needs an 'exact' solution in the problem file")
    for n in degrees:
        for h in h_list:
            _check_config(problem, n, h, delta_ratio * h)
    return {n: convergence_study(problem, n, h_list, delta_ratio, eta) for n in degrees}


def format_convergence(tables: dict[int, list[ConvergenceRow]], style: str, title: str = "") -> str:
    buf = io.StringIO()
    if style == "csv":
        w = _writer(buf)
        w.writerow(["n", "h", "delta", "error_inf", "kappa", "order"])
        for n, rows in tables.items():
            for r in rows:
                w.writerow([n, fmt(r.h), fmt(r.delta), fmt(r.error), fmt(r.kappa), fmt(r.order)])
        return buf.getvalue()

    if title:
        buf.write(f"### {title}\n\n")
    buf.write("| n | h | delta | error_inf | kappa | order |\n|---|---|---|---|---|---|\n")
    for n, rows in tables.items():
        for r in rows:
            kappa = "" if r.kappa is None else f"{r.kappa:.2e}"
            order = "" if r.order is None else f"{r.order:.2f}"
            buf.write(f"| {n} | {h_label(r.h)} | {h_label(r.delta)} | {r.error:.2e} | {kappa} | {order} |\n")
    hs = [r.h for r in next(iter(tables.values()))]
    buf.write("\n| n \\ h | " + " | ".join(h_label(h) for h in hs) + " |\n")
    buf.write("|---" * (len(hs) + 1) + "|\n")
    for n, rows in tables.items():
        buf.write(f"| n={n} | " + " | ".join(f"{r.error:.2e}" for r in rows) + " |\n")
    return buf.getvalue()


def cmd_convergence(args) -> int:
    problem = _load(args.problem)
    tables = run_convergence(problem, parse_int_list(args.degree), parse_list(args.h_list),
                             parse_number(args.delta_ratio), args.eta)
    with _output(args.out) as stream:
        stream.write(format_convergence(tables, args.format))
    return EXIT_OK


# --- basis-dump ------------------------------------------------------------


def basis_dump_rows(n: int, h: float, L: int, gamma: float, grid_step: float,
                    indices: Optional[Iterable[int]] = None) -> list[tuple]:
    basis = make_basis(n, h, L)
    order = FractionalOrder(gamma)
    if not order.gamma < n:
        raise ValidationError(f"need gamma < n, got gamma={gamma}, n={n}")
    indices = list(basis.indices if indices is None else indices)
    for ell in indices:
        basis.check_index(ell)
    xs = grid_points(L, grid_step)
    rows = []
    for ell in indices:
        for x in xs:
            x = float(x)
            side = "left" if x >= L else "right"
            dB = eval_basis_derivative(basis, ell, x, side) if n >= 1 else None
            rows.append((ell, x, eval_basis(basis, ell, x), dB,
                         caputo_basis(basis, order, ell, x), caputo_oracle(basis, order, ell, x)))
    return rows


def cmd_basis_dump(args) -> int:
    rows = basis_dump_rows(args.degree, parse_number(args.h), args.L, parse_number(args.gamma),
                           parse_number(args.grid_step), args.index)
    with _output(args.out) as stream:
        w = _writer(stream)
        w.writerow(["ell", "x", "B", "dB", "caputo", "caputo_oracle"])
        for ell, x, b, db, dg, orc in rows:
            w.writerow([ell, fmt(x), fmt(b), fmt(db), fmt(dg), fmt(orc)])
    gap = max((abs(r[4] - r[5]) / (1.0 + abs(r[5])) for r in rows), default=0.0)
    print(f"max caputo/oracle gap: {gap:.3e}", file=sys.stderr)
    return EXIT_OK


# --- example ---------------------------------------------------------------


def run_example1(gammas: Sequence[float], n: int, h: float, delta: float, eta: int) -> list[dict]:
    out = []
    for g in gammas:
        problem = load_example(1, g)
        basis = _check_config(problem, n, h, delta)
        system = assemble(problem, basis, delta)
        sol = solve_system(system)
        out.append({
            "gamma": g,
            "error_inf": error_inf_norm(sol, problem.exact_solution, delta, eta),
            "kappa": linalg.condition_number(system.matrix),
        })
    return out


def cmd_example(args) -> int:
    number = args.number
    gammas = parse_list(args.gamma) if args.gamma else list(EXAMPLE_GAMMAS[number])
    for g in gammas:
        if g not in EXAMPLE_GAMMAS[number]:
            raise ValidationError(f"example {number} is embedded for gamma in {EXAMPLE_GAMMAS[number]}")
    if args.show:
        for g in gammas:
            print(json.dumps(example_data(number, g), indent=2))
        return EXIT_OK

    with _output(args.out) as stream:
        if number == 1:
            n = parse_int_list(args.degree)[0] if args.degree else 3
            h = parse_number(args.h) if args.h else 1 / 8
            delta = parse_number(args.delta) if args.delta else 1 / 16
            results = run_example1(gammas, n, h, delta, args.eta)
            if args.format == "csv":
                w = _writer(stream)
                w.writerow(["gamma", "error_inf", "kappa"])
                for r in results:
                    w.writerow([fmt(r["gamma"]), fmt(r["error_inf"]), fmt(r["kappa"])])
            else:
                stream.write(f"### Example 1 (n={n}, h={h_label(h)}, delta={h_label(delta)})\n\n")
                stream.write("| gamma | " + " | ".join(str(r["gamma"]) for r in results) + " |\n")
                stream.write("|---" * (len(results) + 1) + "|\n")
                stream.write("| error_inf | " + " | ".join(f"{r['error_inf']:.2e}" for r in results) + " |\n")
                stream.write("| kappa | " + " | ".join(f"{r['kappa']:.2e}" for r in results) + " |\n")
            return EXIT_OK

        degrees = parse_int_list(args.degree) if args.degree else [4, 5, 6]
        h_list = parse_list(args.h_list) if args.h_list else list(PAPER_H_LIST)
        ratio = parse_number(args.delta_ratio)
        for i, g in enumerate(gammas):
            tables = run_convergence(load_example(number, g), degrees, h_list, ratio, args.eta)
            if args.format == "csv":
                text = format_convergence(tables, "csv")
                stream.write(text if i == 0 else text.split("\n", 1)[1])
            else:
                stream.write(format_convergence(tables, "md", f"Example {number}, gamma = {g}"))
                stream.write("\n")
    return EXIT_OK


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracollo", description=(
        "Quasi-interpolant spline collocation for Caputo fractional boundary value problems."))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem file")
    s.add_argument("problem")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--h", required=True, help="spline step, e.g. 1/8 or 2^-3")
    s.add_argument("--delta", required=True, help="collocation spacing")
    s.add_argument("--eta", type=int, default=4, help="error-grid refinement (default 4)")
    s.add_argument("--condition", action="store_true", help="report the condition number")
    s.add_argument("--boundary-weight", type=float, default=1.0)
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("convergence", help="error table over a list of steps")
    c.add_argument("problem")
    c.add_argument("--degree", required=True, help="degree or comma list of degrees")
    c.add_argument("--h-list", required=True)
    c.add_argument("--delta-ratio", default="1/2", help="delta/h (default 1/2)")
    c.add_argument("--eta", type=int, default=4)
    c.add_argument("--format", choices=("md", "csv"), default="md")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convergence)

    b = sub.add_parser("basis-dump", help="basis values and Caputo derivatives on a grid")
    b.add_argument("--degree", type=int, required=True)
    b.add_argument("--h", required=True)
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--gamma", required=True)
    b.add_argument("--grid-step", required=True)
    b.add_argument("--index", type=int, action="append", help="basis index (repeatable)")
    b.add_argument("--out")
    b.set_defaults(func=cmd_basis_dump)

    e = sub.add_parser("example", help="replay a built-in example")
    e.add_argument("number", type=int, choices=(1, 2, 3))
    e.add_argument("--gamma", help="comma list of orders (default: all embedded)")
    e.add_argument("--degree", help="degree(s); default 3 for example 1, 4,5,6 otherwise")
    e.add_argument("--h", help="example 1 step (default 1/8)")
    e.add_argument("--delta", help="example 1 spacing (default 1/16)")
    e.add_argument("--h-list", help="examples 2-3 steps (default 2^-3..2^-6)")
    e.add_argument("--delta-ratio", default="1/2")
    e.add_argument("--eta", type=int, default=4)
    e.add_argument("--format", choices=("md", "csv"), default="md")
    e.add_argument("--show", action="store_true", help="print the embedded problem file(s)")
    e.add_argument("--out")
    e.set_defaults(func=cmd_example)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"fracollo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ProblemFileError, SolvabilityError,
            np.linalg.LinAlgError, IndexError, ValueError) as exc:
        print(f"fracollo: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
