"""Schoenberg-Bernstein quasi-interpolation and spline evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bspline import UniformBasis, basis_derivative_matrix, eval_cardinal
from .fracderiv import caputo_matrix


@dataclass(frozen=True, eq=False)
class SplineFunction:
    """Spline ``sum_l coefficients[l] * B_{h, l, n}`` over ``basis``.

    ``coefficients[c]`` belongs to basis index ``c + basis.index_lo``.
    """

    basis: UniformBasis
    coefficients: np.ndarray

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float).ravel()
        if coef.shape[0] != self.basis.size:
            raise ValueError(
                f"expected {self.basis.size} coefficients for this basis, got {coef.shape[0]}"
            )
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    def coefficient(self, ell: int) -> float:
        return float(self.coefficients[self.basis.column(ell)])

    def __call__(self, x):
        return eval_spline(self, x)


def schoenberg_nodes(basis: UniformBasis, clamp: bool = True) -> np.ndarray:
    """Nodes ``h * (l + (n+1)/2)`` for every basis index, clamped into ``[0, L]``.

    With ``clamp=False`` the raw nodes are returned; those make the spline
    reproduce affine functions exactly on the whole interval.
    """
    ell = np.arange(basis.index_lo, basis.index_hi + 1, dtype=float)
    nodes = basis.step * (ell + (basis.degree + 1) / 2.0)
    if clamp:
        nodes = np.clip(nodes, 0.0, float(basis.length))
    return nodes


def quasi_interpolate(basis: UniformBasis, y: Callable[[float], float]) -> SplineFunction:
    """Schoenberg-Bernstein operator: sample ``y`` at the clamped nodes."""
    coef = [float(y(float(t))) for t in schoenberg_nodes(basis)]
    return SplineFunction(basis, np.array(coef))


def _check_domain(basis: UniformBasis, x: np.ndarray, open_left: bool = False) -> None:
    lo_bad = x <= 0.0 if open_left else x < 0.0
    if np.any(lo_bad) or np.any(x > basis.length):
        bad = x[lo_bad | (x > basis.length)][0]
        interval = "(0, {}]" if open_left else "[0, {}]"
        raise ValueError(f"x = {bad!r} outside {interval.format(basis.length)}")


def active_indices(basis: UniformBasis, x) -> np.ndarray:
    """Basis indices whose support may contain ``x``; shape ``(len(x), n+1)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.minimum(np.floor(x / basis.step).astype(int), basis.index_hi)
    return k[:, None] + np.arange(-basis.degree, 1)[None, :]


def eval_spline(s: SplineFunction, x):
    """Spline value at ``x``, touching only the ``n+1`` locally active coefficients."""
    basis = s.basis
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(basis, xa)
    ell = active_indices(basis, xa)
    vals = eval_cardinal(basis.degree, xa[:, None] / basis.step - ell)
    out = np.sum(vals * s.coefficients[ell - basis.index_lo], axis=1)
    return float(out[0]) if np.ndim(x) == 0 else out


def eval_spline_caputo(s: SplineFunction, order, x):
    """Caputo derivative of the spline; every index left of ``x`` contributes."""
    basis = s.basis
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(basis, xa, open_left=True)
    out = caputo_matrix(basis, order, xa) @ s.coefficients
    return float(out[0]) if np.ndim(x) == 0 else out


def eval_spline_derivative(s: SplineFunction, x):
    """First derivative; right limit at 0 and knots, left limit at ``L``."""
    basis = s.basis
    if basis.degree < 1:
        raise ValueError("derivative of a degree-0 spline is not defined")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(basis, xa)
    right = basis_derivative_matrix(basis, xa, "right") @ s.coefficients
    left = basis_derivative_matrix(basis, xa, "left") @ s.coefficients
    out = np.where(xa >= basis.length, left, right)
    return float(out[0]) if np.ndim(x) == 0 else out
