"""Spline quasi-interpolant collocation for Caputo fractional boundary value problems."""

from .bspline import UniformBasis, eval_basis, eval_cardinal, eval_cardinal_derivative, make_basis
from .collocation import (
    BoundaryRow,
    BvpProblem,
    CollocationSystem,
    SolvabilityError,
    assemble,
    check_solvability,
    collocation_points,
    convergence_study,
    error_inf_norm,
    solve,
)
from .fracderiv import caputo_basis, caputo_interior, caputo_left_edge, caputo_oracle
from .linalg import condition_number, least_squares
from .problemio import load_example, load_problem
from .quasiinterp import (
    SplineFunction,
    eval_spline,
    eval_spline_caputo,
    eval_spline_derivative,
    quasi_interpolate,
    schoenberg_nodes,
)
from .specfun import FractionalOrder, gamma_fn, mittag_leffler

__version__ = "0.1.0"
