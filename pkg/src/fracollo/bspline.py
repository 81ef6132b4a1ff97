"""Cardinal B-splines and the refined truncated basis on ``[0, L]``.

The cardinal B-spline ``B_n`` has integer knots ``0, 1, ..., n+1``. The
refined basis on ``[0, L]`` with step ``h`` is ``B_n(x/h - l)`` for
``-n <= l <= L/h - 1``; indices are kept signed exactly as in that range and
only shifted to 0-based at the matrix layer (:meth:`UniformBasis.column`).

Evaluation runs the Cox-de Boor recurrence. The closed form through
truncated powers is kept as :func:`eval_cardinal_direct` for cross-checks
only, since it cancels catastrophically for large degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specfun import backward_diff, truncated_power


class EdgeKind(str, Enum):
    LEFT = "left"
    INTERIOR = "interior"
    RIGHT = "right"


def _b0(t: np.ndarray, side: str) -> np.ndarray:
    if side == "right":
        return ((t >= 0.0) & (t < 1.0)).astype(float)
    return ((t > 0.0) & (t <= 1.0)).astype(float)


def _cox_de_boor(n: int, t: np.ndarray, side: str = "right") -> np.ndarray:
    # vals[j] holds B_k(t - j); the triangle collapses to B_n(t) in vals[0]
    vals = [_b0(t - j, side) for j in range(n + 1)]
    for k in range(1, n + 1):
        for j in range(n + 1 - k):
            tj = t - j
            vals[j] = (tj * vals[j] + (k + 1 - tj) * vals[j + 1]) / k
    return vals[0]


def _as_output(x, out: np.ndarray):
    return float(out) if np.ndim(x) == 0 else out


def eval_cardinal(n: int, x, side: str = "right"):
    """Cardinal B-spline ``B_n(x)``, zero outside ``[0, n+1]``.

    Args:
        n: Degree, ``n >= 0``.
        x: Scalar or array.
        side: ``"right"`` (default) for right-continuous values at knots,
            ``"left"`` for left limits. Only matters for ``n == 0``.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    t = np.asarray(x, dtype=float)
    return _as_output(x, _cox_de_boor(n, t, side))


def eval_cardinal_direct(n: int, x):
    """``B_n`` from the truncated-power formula ``Delta^{n+1} x_+^n / n!``."""
    return backward_diff(lambda t: truncated_power(t, n), n + 1, x) / math.factorial(n)


def _derivative(n: int, m: int, x, side: str):
    # B_n^(m) = Delta^m B_{n-m}
    t = np.asarray(x, dtype=float)
    out = backward_diff(lambda s: _cox_de_boor(n - m, s, side), m, t)
    return _as_output(x, np.asarray(out, dtype=float))


def eval_cardinal_derivative(n: int, m: int, x):
    """m-th ordinary derivative of ``B_n``, for ``0 <= m <= n-1``.

    Evaluated as the m-th backward difference of ``B_{n-m}``, which equals
    ``Delta^{n+1} x_+^{n-m} / (n-m)!`` and is continuous in this range.
    """
    if m < 0:
        raise ValueError(f"derivative order must be >= 0, got {m}")
    if m == 0:
        return eval_cardinal(n, x)
    if m >= n:
        raise ValueError(f"derivative order {m} too high for degree {n} (need m <= n-1)")
    return _derivative(n, m, x, "right")


def eval_cardinal_derivative_direct(n: int, m: int, x):
    """Truncated-power form of the m-th derivative; test oracle."""
    return backward_diff(lambda t: truncated_power(t, n - m), n + 1, x) / math.factorial(n - m)


@dataclass(frozen=True)
class UniformBasis:
    """Degree-``n`` B-spline basis with uniform step ``h`` on ``[0, L]``."""

    degree: int
    step: float
    length: int

    def __post_init__(self):
        n, h, L = self.degree, self.step, self.length
        if int(n) != n or n < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
        if int(L) != L or L <= 0:
            raise ValueError(f"length must be a positive integer, got {L!r}")
        if not h > 0:
            raise ValueError(f"step must be positive, got {h!r}")
        ratio = L / h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"L/h = {ratio!r} is not an integer (L={L}, h={h})")
        if round(ratio) < n + 1:
            raise ValueError(f"L/h = {round(ratio)} must be at least n+1 = {n + 1}")
        object.__setattr__(self, "degree", int(n))
        object.__setattr__(self, "length", int(L))
        object.__setattr__(self, "step", float(h))

    @property
    def n_knots(self) -> int:
        return int(round(self.length / self.step))

    @property
    def index_lo(self) -> int:
        return -self.degree

    @property
    def index_hi(self) -> int:
        return self.n_knots - 1

    @property
    def size(self) -> int:
        return self.n_knots + self.degree

    @property
    def indices(self) -> range:
        return range(self.index_lo, self.index_hi + 1)

    def column(self, ell: int) -> int:
        """0-based matrix column of basis index ``ell``."""
        self.check_index(ell)
        return ell - self.index_lo

    def check_index(self, ell: int) -> None:
        if not self.index_lo <= ell <= self.index_hi:
            raise IndexError(
                f"basis index {ell} outside [{self.index_lo}, {self.index_hi}]"
            )

    def kind(self, ell: int) -> EdgeKind:
        self.check_index(ell)
        if ell < 0:
            return EdgeKind.LEFT
        if ell <= self.n_knots - self.degree - 1:
            return EdgeKind.INTERIOR
        return EdgeKind.RIGHT

    def support(self, ell: int) -> tuple[float, float]:
        """Support of basis function ``ell`` intersected with ``[0, L]``."""
        self.check_index(ell)
        h = self.step
        return max(0.0, h * ell), min(float(self.length), h * (ell + self.degree + 1))


def make_basis(n: int, h: float, L: int) -> UniformBasis:
    return UniformBasis(n, h, L)


def eval_basis(basis: UniformBasis, ell: int, x):
    """``B_n(x/h - ell)``."""
    basis.check_index(ell)
    t = np.asarray(x, dtype=float) / basis.step - ell
    return _as_output(x, _cox_de_boor(basis.degree, t))


def eval_basis_derivative(basis: UniformBasis, ell: int, x, side: str = "right"):
    """First derivative ``h**-1 B_n'(x/h - ell)``.

    ``side`` selects one-sided limits at knots, which only differ for n=1.
    """
    basis.check_index(ell)
    if basis.degree < 1:
        raise ValueError("derivative of a degree-0 spline is not defined")
    t = np.asarray(x, dtype=float) / basis.step - ell
    return _as_output(x, np.asarray(_derivative(basis.degree, 1, t, side)) / basis.step)


def basis_matrix(basis: UniformBasis, x) -> np.ndarray:
    """Matrix ``M[i, c] = B_{h, l, n}(x_i)`` with ``c`` the 0-based column of ``l``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = x[:, None] / basis.step - np.arange(basis.index_lo, basis.index_hi + 1)[None, :]
    return _cox_de_boor(basis.degree, t)


def basis_derivative_matrix(basis: UniformBasis, x, side: str = "right") -> np.ndarray:
    if basis.degree < 1:
        raise ValueError("derivative of a degree-0 spline is not defined")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = x[:, None] / basis.step - np.arange(basis.index_lo, basis.index_hi + 1)[None, :]
    return np.asarray(_derivative(basis.degree, 1, t, side)) / basis.step
