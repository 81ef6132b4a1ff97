"""Independent reference computations used only by the tests."""

from fractions import Fraction
from math import comb, factorial

import mpmath as mp


def cardinal_exact(n, x):
    """B_n(x) from the truncated-power formula in exact rational arithmetic."""
    x = Fraction(x)
    total = Fraction(0)
    for j in range(n + 2):
        t = x - j
        if t > 0 or (n == 0 and t == 0):
            total += (-1) ** j * comb(n + 1, j) * t**n
    return total / factorial(n)


def _cardinal_derivative_mp(n, m, t):
    # Delta^{n+1} t_+^{n-m} / (n-m)!, evaluated at high precision
    total = mp.mpf(0)
    for j in range(n + 2):
        s = t - j
        if s > 0:
            total += (-1) ** j * comb(n + 1, j) * s ** (n - m)
    return total / factorial(n - m)


def caputo_quad(n, h, ell, gamma, x, dps=30):
    """Caputo derivative of B_n(xi/h - ell) at x by tanh-sinh quadrature of the definition."""
    with mp.workdps(dps):
        m = int(mp.ceil(gamma))
        x = mp.mpf(x)
        h = mp.mpf(h)
        g = mp.mpf(gamma)
        if x <= 0:
            return mp.mpf(0)

        def integrand(xi):
            return _cardinal_derivative_mp(n, m, xi / h - ell) * h ** (-m) * (x - xi) ** (m - g - 1)

        pts = [mp.mpf(0)] + [h * (ell + k) for k in range(n + 2) if 0 < h * (ell + k) < x] + [x]
        val = mp.quad(integrand, pts)
        return val / mp.gamma(m - g)
