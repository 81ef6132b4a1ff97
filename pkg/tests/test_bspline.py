import numpy as np
import pytest

from fracollo.bspline import (
    EdgeKind,
    basis_derivative_matrix,
    basis_matrix,
    eval_basis,
    eval_basis_derivative,
    eval_cardinal,
    eval_cardinal_derivative,
    eval_cardinal_derivative_direct,
    eval_cardinal_direct,
    make_basis,
)

from oracles import cardinal_exact


@pytest.mark.parametrize("n, x, expected", [(0, 0.5, 1.0), (1, 1.0, 1.0), (3, 2.0, 2 / 3)])
def test_eval_cardinal_values(n, x, expected):
    assert eval_cardinal(n, x) == pytest.approx(expected, abs=1e-15)


def test_frozen_value_matches_exact_oracle():
    assert float(cardinal_exact(3, 2)) == 0.6666666666666666


def test_right_continuity():
    assert eval_cardinal(0, 0.0) == 1.0
    assert eval_cardinal(0, 1.0) == 0.0
    assert eval_cardinal(0, 1.0, side="left") == 1.0


@pytest.mark.parametrize("n", range(0, 7))
def test_recurrence_vs_exact_rational(n):
    rng = np.random.default_rng(n)
    for x in rng.uniform(-0.5, n + 1.5, 200):
        assert eval_cardinal(n, x) == pytest.approx(float(cardinal_exact(n, x)), abs=1e-13)


@pytest.mark.parametrize("n", range(0, 7))
def test_recurrence_vs_direct_formula(n):
    x = np.random.default_rng(10 + n).uniform(0, n + 1, 1000)
    assert np.max(np.abs(eval_cardinal(n, x) - eval_cardinal_direct(n, x))) <= 1e-10


@pytest.mark.parametrize("n", range(0, 8))
def test_nonnegative_and_support(n):
    x = np.linspace(-2, n + 3, 2001)
    v = eval_cardinal(n, x)
    assert np.all(v >= 0)
    assert np.all(v[(x < 0) | (x >= n + 1)] == 0)


@pytest.mark.parametrize(
    "n, m, x, expected", [(3, 0, 2.0, 2 / 3), (3, 1, 2.0, 0.0), (2, 1, 0.5, 0.5)]
)
def test_cardinal_derivative_values(n, m, x, expected):
    assert eval_cardinal_derivative(n, m, x) == pytest.approx(expected, abs=1e-15)


def test_cardinal_derivative_matches_truncated_power_form():
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        for m in range(0, n):
            x = rng.uniform(0, n + 1, 200)
            np.testing.assert_allclose(
                eval_cardinal_derivative(n, m, x), eval_cardinal_derivative_direct(n, m, x), atol=1e-10
            )


def test_cardinal_derivative_order_too_high():
    with pytest.raises(ValueError):
        eval_cardinal_derivative(3, 3, 1.0)


@pytest.mark.parametrize("n", range(2, 7))
def test_derivative_vs_central_difference(n):
    x = np.random.default_rng(n).uniform(0, n + 1, 300)
    x = x[np.abs(x - np.round(x)) > 1e-3]
    step = 1e-6
    fd = (eval_cardinal(n, x + step) - eval_cardinal(n, x - step)) / (2 * step)
    assert np.max(np.abs(eval_cardinal_derivative(n, 1, x) - fd)) <= 1e-5


@pytest.mark.parametrize("n", range(2, 7))
def test_first_derivative_continuous_at_knots(n):
    b = make_basis(n, 1.0, n + 1)
    for k in range(0, n + 2):
        for ell in (0,):
            left = eval_basis_derivative(b, ell, float(k), side="left")
            right = eval_basis_derivative(b, ell, float(k), side="right")
            assert abs(left - right) <= 1e-9


def test_make_basis_example1():
    b = make_basis(3, 1 / 8, 1)
    assert b.size == 11
    assert list(b.indices) == list(range(-3, 8))


def test_make_basis_degree_zero():
    b = make_basis(0, 1.0, 1)
    assert b.size == 1 and list(b.indices) == [0]
    assert b.kind(0) is EdgeKind.INTERIOR


def test_edge_classification():
    b = make_basis(4, 1 / 8, 1)
    assert b.size == 12
    assert [l for l in b.indices if b.kind(l) is EdgeKind.LEFT] == [-4, -3, -2, -1]
    assert [l for l in b.indices if b.kind(l) is EdgeKind.INTERIOR] == [0, 1, 2, 3]
    assert [l for l in b.indices if b.kind(l) is EdgeKind.RIGHT] == [4, 5, 6, 7]


@pytest.mark.parametrize("n, h, L", [(3, 0.3, 1), (4, 0.25, 1), (2, 0.5, 1)])
def test_make_basis_rejects(n, h, L):
    with pytest.raises(ValueError):
        make_basis(n, h, L)


def test_eval_basis_values():
    assert eval_basis(make_basis(1, 1.0, 2), 0, 1.0) == 1.0
    b = make_basis(3, 1 / 8, 1)
    assert eval_basis(b, -3, 0.0) == pytest.approx(1 / 6, abs=1e-15)
    assert eval_basis(b, 7, 1.0) == pytest.approx(1 / 6, abs=1e-15)
    with pytest.raises(IndexError):
        eval_basis(b, 8, 0.5)
    with pytest.raises(IndexError):
        eval_basis(b, -4, 0.5)


@pytest.mark.parametrize("n", range(1, 7))
def test_partition_of_unity(n):
    for h, L in [(1 / 8, 1), (1 / 4, 2), (1.0, n + 1)]:
        b = make_basis(n, h, L)
        x = np.random.default_rng(n).uniform(0, L, 1000)
        x = np.concatenate([x, [0.0, float(L)]])
        assert np.max(np.abs(basis_matrix(b, x).sum(axis=1) - 1)) <= 1e-12


@pytest.mark.parametrize("n", [1, 3, 5])
def test_support_of_refined_basis(n):
    b = make_basis(n, 1 / 8, 1)
    x = np.linspace(0, 1, 1601)
    for ell in b.indices:
        lo, hi = b.support(ell)
        v = eval_basis(b, ell, x)
        assert np.all(v[(x < lo) | (x > hi)] == 0)


def test_matrix_forms_agree_with_pointwise():
    b = make_basis(4, 1 / 4, 2)
    x = np.linspace(0, 2, 37)
    M = basis_matrix(b, x)
    dM = basis_derivative_matrix(b, x)
    for c, ell in enumerate(b.indices):
        np.testing.assert_array_equal(M[:, c], eval_basis(b, ell, x))
        np.testing.assert_allclose(dM[:, c], eval_basis_derivative(b, ell, x), atol=1e-14)
