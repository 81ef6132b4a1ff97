"""Collocation solver for fractional boundary value problems.

The problem is

    D^g y(x) + f(x) y(x) = g(x),   0 < x < L,
    rho0 y(0) + rho1 y'(0) + zeta0 y(L) + zeta1 y'(L) = c   (ceil(g) rows),

with ``D^g`` the Caputo derivative. The solution is sought as a spline over
a :class:`~fracollo.bspline.UniformBasis`; the equation is collocated at
the interior points of a uniform grid of spacing ``delta`` and stacked with
the boundary rows into one (usually overdetermined) least-squares system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .bspline import UniformBasis, basis_derivative_matrix, basis_matrix, make_basis
from .fracderiv import caputo_matrix
from .quasiinterp import SplineFunction, eval_spline
from .specfun import FractionalOrder


class SolvabilityError(ValueError):
    """Fewer collocation equations than spline unknowns."""


@dataclass(frozen=True)
class BoundaryRow:
    rho0: float = 0.0
    rho1: float = 0.0
    zeta0: float = 0.0
    zeta1: float = 0.0
    c: float = 0.0

    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.rho0, self.rho1, self.zeta0, self.zeta1)


@dataclass(frozen=True)
class BvpProblem:
    """A linear Caputo boundary value problem on ``[0, L]``.

    ``f``, ``g`` and ``exact_solution`` are scalar callables of ``x``.
    """

    order: FractionalOrder
    length: int
    f: Callable[[float], float]
    g: Callable[[float], float]
    boundary_rows: tuple[BoundaryRow, ...]
    exact_solution: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if not isinstance(self.order, FractionalOrder):
            object.__setattr__(self, "order", FractionalOrder(self.order))
        if int(self.length) != self.length or self.length <= 0:
            raise ValueError(f"L must be a positive integer, got {self.length!r}")
        object.__setattr__(self, "length", int(self.length))
        rows = tuple(self.boundary_rows)
        object.__setattr__(self, "boundary_rows", rows)
        need = self.order.ceil_gamma
        if len(rows) != need:
            raise ValueError(
                f"gamma={self.order.gamma} needs exactly ceil(gamma)={need} boundary rows, "
                f"got {len(rows)}"
            )
        coef = np.array([r.coefficients() for r in rows], dtype=float)
        if linalg.matrix_rank(coef) < need:
            raise ValueError("boundary conditions are not linearly independent")


@dataclass(frozen=True)
class Solvability:
    rows: int
    cols: int

    @property
    def ok(self) -> bool:
        return self.rows >= self.cols

    @property
    def strict(self) -> bool:
        """Strictly overdetermined, the preferred regime."""
        return self.rows > self.cols

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        rel = ">=" if self.ok else "<"
        return f"N_delta - 1 + ceil(gamma) = {self.rows} {rel} N_h + n + 1 = {self.cols}"


@dataclass(frozen=True, eq=False)
class CollocationSystem:
    """Stacked matrix and right-hand side; interior rows first, then boundary rows."""

    matrix: np.ndarray
    rhs: np.ndarray
    delta: float
    collocation_points: np.ndarray
    basis: UniformBasis
    n_interior: int = field(default=0)


def grid_points(L: int, delta: float) -> np.ndarray:
    """``x_r = delta * r`` for ``0 <= r <= L/delta``."""
    n_delta = _grid_count(L, delta)
    return delta * np.arange(n_delta + 1)


def collocation_points(L: int, s: int) -> np.ndarray:
    """Uniform points of spacing ``2**-s`` on ``[0, L]``."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    return grid_points(L, 2.0 ** (-s))


def _grid_count(L: int, delta: float) -> int:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    ratio = L / delta
    count = int(round(ratio))
    if abs(ratio - count) > 1e-9 * max(1.0, ratio) or count < 1:
        raise ValueError(f"L/delta = {ratio!r} is not a positive integer")
    return count


def check_solvability(basis: UniformBasis, order, delta: float) -> Solvability:
    """Compare equation count ``N_delta - 1 + ceil(g)`` with unknown count ``N_h + n + 1``."""
    if not isinstance(order, FractionalOrder):
        order = FractionalOrder(order)
    n_delta = _grid_count(basis.length, delta)
    return Solvability(rows=n_delta - 1 + order.ceil_gamma, cols=basis.size)


def _sample(func: Callable[[float], float], xs: np.ndarray) -> np.ndarray:
    return np.array([float(func(float(x))) for x in xs])


def assemble(
    problem: BvpProblem, basis: UniformBasis, delta: float, boundary_weight: float = 1.0
) -> CollocationSystem:
    """Build the collocation least-squares system.

    Raises:
        SolvabilityError: when there are fewer equations than unknowns.
    """
    if basis.length != problem.length:
        raise ValueError(f"basis length {basis.length} != problem length {problem.length}")
    if not problem.order.gamma < basis.degree:
        raise ValueError(f"need gamma < n, got gamma={problem.order.gamma}, n={basis.degree}")
    status = check_solvability(basis, problem.order, delta)
    if not status:
        raise SolvabilityError(f"system is underdetermined: {status.describe()}")

    pts = grid_points(problem.length, delta)
    inner = pts[1:-1]
    D = caputo_matrix(basis, problem.order, inner)
    A = basis_matrix(basis, inner)
    interior = D + _sample(problem.f, inner)[:, None] * A
    rhs_inner = _sample(problem.g, inner)

    L = float(problem.length)
    ends = np.array([0.0, L])
    B = basis_matrix(basis, ends)
    if basis.degree >= 1:
        dB0 = basis_derivative_matrix(basis, [0.0], "right")[0]
        dBL = basis_derivative_matrix(basis, [L], "left")[0]
    else:
        dB0 = dBL = np.zeros(basis.size)
    brows, brhs = [], []
    for row in problem.boundary_rows:
        if basis.degree < 1 and (row.rho1 or row.zeta1):
            raise ValueError("derivative boundary conditions need degree >= 1")
        brows.append(row.rho0 * B[0] + row.rho1 * dB0 + row.zeta0 * B[1] + row.zeta1 * dBL)
        brhs.append(row.c)

    matrix = np.vstack([interior, boundary_weight * np.array(brows)])
    rhs = np.concatenate([rhs_inner, boundary_weight * np.array(brhs)])
    return CollocationSystem(matrix, rhs, float(delta), pts, basis, n_interior=len(inner))


def solve_system(system: CollocationSystem) -> SplineFunction:
    coef = linalg.least_squares(system.matrix, system.rhs)
    return SplineFunction(system.basis, coef)


def solve(
    problem: BvpProblem, basis: UniformBasis, delta: float, boundary_weight: float = 1.0
) -> SplineFunction:
    """Least-squares collocation solution as a spline over ``basis``."""
    return solve_system(assemble(problem, basis, delta, boundary_weight))


def error_grid(L: int, delta: float, eta: int) -> np.ndarray:
    """The ``eta``-fold refinement ``x_r = delta * r / eta`` of the collocation grid."""
    if int(eta) != eta or eta < 1:
        raise ValueError(f"eta must be a positive integer, got {eta!r}")
    n = _grid_count(L, delta) * int(eta)
    return np.minimum(delta * np.arange(n + 1) / eta, float(L))


def error_inf_norm(
    s: SplineFunction, exact: Callable[[float], float], delta: float, eta: int = 4
) -> float:
    """Max of ``|exact - s|`` over the ``eta``-refined collocation grid."""
    xs = error_grid(s.basis.length, delta, eta)
    return float(np.max(np.abs(_sample(exact, xs) - eval_spline(s, xs))))


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    delta: float
    error: float
    kappa: Optional[float]
    order: Optional[float] = None


def convergence_study(
    problem: BvpProblem,
    n: int,
    h_list: Sequence[float],
    delta_ratio: float = 0.5,
    eta: int = 4,
    with_condition: bool = True,
) -> list[ConvergenceRow]:
    """Solve for each ``h`` with ``delta = delta_ratio * h`` and tabulate errors.

    ``order`` is ``log2(e_prev / e)`` for consecutive rows where ``h`` halves,
    and ``log(e_prev / e) / log(h_prev / h)`` otherwise; None on the first row.
    """
    if problem.exact_solution is None:
        raise ValueError("convergence study needs an exact solution")
    rows: list[ConvergenceRow] = []
    for h in h_list:
        basis = make_basis(n, h, problem.length)
        delta = delta_ratio * h
        system = assemble(problem, basis, delta)
        sol = solve_system(system)
        err = error_inf_norm(sol, problem.exact_solution, delta, eta)
        kappa = linalg.condition_number(system.matrix) if with_condition else None
        order = None
        if rows and err > 0 and rows[-1].error > 0:
            prev = rows[-1]
            order = math.log(prev.error / err) / math.log(prev.h / h)
        rows.append(ConvergenceRow(h, delta, err, kappa, order))
    return rows
