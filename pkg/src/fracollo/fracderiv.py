"""Caputo fractional derivatives of the refined B-spline basis.

Closed forms:

* interior and right-edge functions (``l >= 0``) use the fractional
  truncated-power rule ``Delta^{n+1} x_+^{n-g} / Gamma(n+1-g)``;
* left-edge functions (``l < 0``) subtract, for every knot left of the
  origin, the part of that rule that the Caputo operator (lower terminal 0)
  does not see, and add back the Caputo derivative of the corresponding
  polynomial piece;
* a step ``h`` contributes the factor ``h**-g``.

:func:`caputo_oracle` evaluates the defining integral directly, panel by
panel, and shares no code with the closed forms beyond the B-spline
piece coefficients.
"""

from __future__ import annotations

import math

import numpy as np

from .bspline import UniformBasis
from .specfun import FractionalOrder, backward_diff, binomial, gamma_fn, truncated_power


def _as_order(order) -> FractionalOrder:
    return order if isinstance(order, FractionalOrder) else FractionalOrder(order)


def _check_order(n: int, order: FractionalOrder) -> None:
    if not order.gamma < n:
        raise ValueError(f"need gamma < n for the closed-form rule, got gamma={order.gamma}, n={n}")


def _out(x, value):
    return float(value) if np.ndim(x) == 0 else np.asarray(value, dtype=float)


def caputo_interior(n: int, order, x):
    """Caputo derivative of ``B_n`` whose support starts at or right of 0."""
    order = _as_order(order)
    _check_order(n, order)
    mu = n - order.gamma
    t = np.asarray(x, dtype=float)
    value = backward_diff(lambda s: truncated_power(s, mu), n + 1, t) / gamma_fn(mu + 1.0)
    return _out(x, value)


def caputo_left_edge(n: int, order, ell: int, x):
    """Caputo derivative (lower terminal 0) of ``B_n(x - ell)`` for ``-n <= ell <= -1``."""
    order = _as_order(order)
    _check_order(n, order)
    if not -n <= ell <= -1:
        raise ValueError(f"left-edge index must lie in [{-n}, -1], got {ell}")
    g = order.gamma
    m = order.ceil_gamma
    mu = n - g
    gmu = gamma_fn(mu + 1.0)
    t = np.asarray(x, dtype=float)

    value = backward_diff(lambda s: truncated_power(s - ell, mu), n + 1, t) / gmu
    # lower-order Caputo weights x^{m-g+p} / Gamma(m-g+p+1), shared across r
    powers = [
        truncated_power(t, m - g + p) / gamma_fn(m - g + p + 1.0) for p in range(n - m + 1)
    ]
    for r in range(-ell):
        shift = -ell - r
        corr = truncated_power(t + shift, mu) / gmu
        for p in range(n - m + 1):
            corr = corr - shift ** (n - m - p) / math.factorial(n - m - p) * powers[p]
        w = binomial(n + 1, r)
        value = value - (w if r % 2 == 0 else -w) * corr
    return _out(x, value)


def caputo_basis(basis: UniformBasis, order, ell: int, x):
    """Caputo derivative of ``B_n(x/h - ell)`` at ``x``."""
    order = _as_order(order)
    basis.check_index(ell)
    h = basis.step
    t = np.asarray(x, dtype=float) / h
    if ell >= 0:
        kernel = caputo_interior(basis.degree, order, t - ell)
    else:
        kernel = caputo_left_edge(basis.degree, order, ell, t)
    return _out(x, h ** (-order.gamma) * np.asarray(kernel))


def caputo_matrix(basis: UniformBasis, order, x) -> np.ndarray:
    """Matrix ``D[i, c] = D^g B_{h, l, n}(x_i)`` over all basis indices."""
    order = _as_order(order)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    cols = [caputo_basis(basis, order, ell, x) for ell in basis.indices]
    return np.column_stack(cols)


def _piece_derivative(n: int, m: int, k: int) -> list[tuple[float, int]]:
    """Weights and shifts of ``B_n^(m)`` on ``[k, k+1]``: ``sum w (t - j)^(n-m) / (n-m)!``."""
    q = n - m
    return [((-1) ** j * binomial(n + 1, j) / math.factorial(q), j) for j in range(k + 1)]


def caputo_oracle(basis: UniformBasis, order, ell: int, x: float) -> float:
    """Caputo derivative from its integral definition, integrated exactly.

    The ``ceil(g)``-th derivative of ``B_n(xi/h - ell)`` is a polynomial on
    each knot panel of ``[0, x]``. Each piece is re-expanded in powers of
    ``u = x - xi`` and integrated against ``u**(ceil(g) - g - 1)`` in closed
    form.
    """
    order = _as_order(order)
    basis.check_index(ell)
    n, h = basis.degree, basis.step
    g, m = order.gamma, order.ceil_gamma
    if not n > g:
        raise ValueError(f"oracle needs n > gamma, got n={n}, gamma={g}")
    x = float(x)
    if x <= 0.0:
        return 0.0
    q = n - m
    alpha = m - g
    total = 0.0
    for k in range(n + 1):
        a = max(h * (ell + k), 0.0)
        b = min(h * (ell + k + 1), x)
        if b <= a:
            continue
        # coefficients of the piece in powers of u, from t - j = c_j - u/h
        coef = np.zeros(q + 1)
        for w, j in _piece_derivative(n, m, k):
            c = x / h - ell - j
            for i in range(q + 1):
                coef[i] += w * binomial(q, i) * c ** (q - i) * (-1.0 / h) ** i
        u_lo, u_hi = x - b, x - a
        for i in range(q + 1):
            e = i + alpha
            total += coef[i] * (u_hi**e - u_lo**e) / e
    return total * h ** (-m) / gamma_fn(alpha)
