import math

import numpy as np
import pytest

from fracollo.bspline import basis_matrix, make_basis
from fracollo.collocation import (
    BoundaryRow,
    BvpProblem,
    SolvabilityError,
    assemble,
    check_solvability,
    collocation_points,
    convergence_study,
    error_grid,
    error_inf_norm,
    solve,
    solve_system,
)
from fracollo.fracderiv import caputo_matrix
from fracollo.quasiinterp import SplineFunction, eval_spline, eval_spline_caputo
from fracollo.specfun import FractionalOrder, mittag_leffler

from paper_tables import EXAMPLE2, EXAMPLE3, H_LIST


def example1(g):
    return BvpProblem(
        g, 1, lambda x: x**0.5,
        lambda x: 2 / math.gamma(2 - g) * x ** (1 - g) + 2 * x**1.5,
        [BoundaryRow(rho0=1, zeta0=1, c=2)], lambda x: 2 * x,
    )


def example2(g, nu=2.5):
    return BvpProblem(
        g, 1, lambda x: 1.0,
        lambda x: math.gamma(nu + 1) / math.gamma(nu + 1 - g) * x ** (nu - g) + x**nu,
        [BoundaryRow(rho0=1, c=0), BoundaryRow(zeta0=1, c=1)], lambda x: x**nu,
    )


def example3(g):
    return BvpProblem(
        g, 1, lambda x: 1.0, lambda x: 0.0,
        [BoundaryRow(rho0=1, c=1), BoundaryRow(zeta0=1, c=mittag_leffler(g, -1.0))],
        lambda x: mittag_leffler(g, -(x**g)),
    )


def test_collocation_points():
    np.testing.assert_array_equal(collocation_points(1, 0), [0, 1])
    np.testing.assert_array_equal(collocation_points(1, 1), [0, 0.5, 1])
    np.testing.assert_array_equal(collocation_points(2, 2), np.arange(9) * 0.25)


def test_solvability_examples():
    s = check_solvability(make_basis(3, 1 / 8, 1), 0.5, 1 / 16)
    assert s and s.strict and (s.rows, s.cols) == (16, 11)
    s = check_solvability(make_basis(6, 2**-3, 1), 1.5, 2**-4)
    assert s and (s.rows, s.cols) == (17, 14)
    s = check_solvability(make_basis(6, 1 / 8, 1), 0.5, 1 / 8)
    assert not s and (s.rows, s.cols) == (8, 14)
    assert "8 < N_h + n + 1 = 14" in s.describe()


def test_problem_validation():
    with pytest.raises(ValueError, match="boundary rows"):
        BvpProblem(1.5, 1, abs, abs, [BoundaryRow(rho0=1)])
    with pytest.raises(ValueError, match="independent"):
        BvpProblem(1.5, 1, abs, abs, [BoundaryRow(rho0=1), BoundaryRow(rho0=2)])
    with pytest.raises(ValueError):
        BvpProblem(2.0, 1, abs, abs, [BoundaryRow(rho0=1), BoundaryRow(zeta0=1)])
    p = BvpProblem(0.5, 1, abs, abs, [BoundaryRow(rho0=1)])
    assert isinstance(p.order, FractionalOrder)


def test_example1_system_shape():
    sys_ = assemble(example1(0.5), make_basis(3, 1 / 8, 1), 1 / 16)
    assert sys_.matrix.shape == (16, 11)
    assert sys_.n_interior == 15


def test_zero_f_gives_pure_caputo_block():
    p = BvpProblem(0.5, 1, lambda x: 0.0, lambda x: 1.0, [BoundaryRow(rho0=1, c=0)])
    b = make_basis(3, 1 / 8, 1)
    s = assemble(p, b, 1 / 16)
    np.testing.assert_array_equal(s.matrix[:-1], caputo_matrix(b, 0.5, s.collocation_points[1:-1]))


def test_dirichlet_row_support():
    p = BvpProblem(0.5, 1, lambda x: 0.0, lambda x: 1.0, [BoundaryRow(rho0=1, c=0)])
    b = make_basis(3, 1 / 8, 1)
    row = assemble(p, b, 1 / 16).matrix[-1]
    nonzero = [l for l, v in zip(b.indices, row) if v != 0]
    assert nonzero == [-3, -2, -1]


def test_derivative_boundary_rows():
    # D^g y = g with y(0)=1, y'(0)=... checked against an exact quadratic
    g = 1.5
    exact = lambda x: 1 + 0.5 * x + x**2
    rhs = lambda x: 2 * x ** (2 - g) / math.gamma(3 - g)
    p = BvpProblem(g, 1, lambda x: 0.0, rhs,
                   [BoundaryRow(rho0=1, c=1), BoundaryRow(rho1=1, zeta1=1, c=0.5 + 2.5)], exact)
    s = solve(p, make_basis(3, 1 / 8, 1), 1 / 16)
    assert error_inf_norm(s, exact, 1 / 16) <= 1e-10


def test_underdetermined_rejected():
    with pytest.raises(SolvabilityError, match="8 < N_h"):
        assemble(example1(0.5), make_basis(6, 1 / 8, 1), 1 / 8)


def test_gamma_must_be_below_degree():
    with pytest.raises(ValueError):
        assemble(example2(1.5), make_basis(1, 1 / 8, 1), 1 / 16)


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75])
def test_example1_exact(g):
    s = solve(example1(g), make_basis(3, 1 / 8, 1), 1 / 16)
    assert error_inf_norm(s, lambda x: 2 * x, 1 / 16, 4) <= 1e-10


def test_homogeneous_problem_zero_solution():
    p = BvpProblem(1.5, 1, lambda x: 0.0, lambda x: 0.0, [BoundaryRow(rho0=1), BoundaryRow(zeta0=1)])
    s = solve(p, make_basis(4, 1 / 8, 1), 1 / 16)
    assert np.all(s.coefficients == 0)


def test_example2_single_entry():
    s = solve(example2(1.5), make_basis(4, 2**-3, 1), 2**-4)
    err = error_inf_norm(s, lambda x: x**2.5, 2**-4, 4)
    assert 1.05e-4 / 3 <= err <= 1.05e-4 * 3


def test_error_norm_definition():
    b = make_basis(3, 1 / 8, 1)
    s = SplineFunction(b, np.random.default_rng(0).normal(size=b.size))
    assert error_inf_norm(s, lambda x: eval_spline(s, x), 1 / 16, 4) == 0.0
    grid = error_grid(1, 1 / 16, 1)
    np.testing.assert_array_equal(grid, np.arange(17) / 16)
    exact = lambda x: math.sin(3 * x)
    ref = max(abs(exact(x) - eval_spline(s, x)) for x in grid)
    assert error_inf_norm(s, exact, 1 / 16, 1) == ref
    assert len(error_grid(1, 1 / 16, 4)) == 65


def test_residual_consistency():
    p = example3(1.25)
    b = make_basis(5, 2**-4, 1)
    system = assemble(p, b, 2**-5)
    s = solve_system(system)
    xr = system.collocation_points[1:-1]
    res_matrix = (system.matrix @ s.coefficients - system.rhs)[: system.n_interior]
    res_eval = eval_spline_caputo(s, p.order, xr) + eval_spline(s, xr) - 0.0
    np.testing.assert_allclose(res_matrix, res_eval, atol=1e-9)


def test_boundary_weight_changes_only_boundary_rows():
    b = make_basis(4, 1 / 8, 1)
    a = assemble(example2(1.5), b, 1 / 16)
    w = assemble(example2(1.5), b, 1 / 16, boundary_weight=10.0)
    np.testing.assert_array_equal(a.matrix[:-2], w.matrix[:-2])
    np.testing.assert_array_equal(10 * a.matrix[-2:], w.matrix[-2:])


def test_determinism():
    b = make_basis(6, 2**-5, 1)
    s1 = solve(example3(1.5), b, 2**-6)
    s2 = solve(example3(1.5), b, 2**-6)
    assert s1.coefficients.tobytes() == s2.coefficients.tobytes()


def test_linear_exact_solution_any_h():
    for h in H_LIST:
        rows = convergence_study(example1(0.5), 3, [h], delta_ratio=0.5, with_condition=False)
        assert rows[0].error <= 1e-10


def test_convergence_study_example3():
    rows = convergence_study(example3(1.25), 4, H_LIST)
    ref = EXAMPLE3[1.25][4]
    for r, e in zip(rows, ref):
        assert e / 3 <= r.error <= 3 * e
        assert r.kappa > 1
    assert rows[0].order is None
    assert all(0.8 < r.order < 1.2 for r in rows[1:])


def test_convergence_study_example2():
    rows = convergence_study(example2(1.75), 6, H_LIST, with_condition=False)
    for r, e in zip(rows, EXAMPLE2[1.75][6]):
        assert e / 3 <= r.error <= 3 * e
    assert all(b.error < a.error for a, b in zip(rows, rows[1:]))


def test_convergence_needs_exact():
    p = BvpProblem(0.5, 1, abs, abs, [BoundaryRow(rho0=1)])
    with pytest.raises(ValueError):
        convergence_study(p, 3, [1 / 8])


@pytest.mark.parametrize("number, table", [(2, EXAMPLE2), (3, EXAMPLE3)])
def test_reported_tables_reproduced_closely(number, table):
    make = example2 if number == 2 else example3
    worst = 0.0
    for g, by_n in table.items():
        for n, ref in by_n.items():
            rows = convergence_study(make(g), n, H_LIST, with_condition=False)
            worst = max(worst, max(abs(r.error / e - 1) for r, e in zip(rows, ref)))
    assert worst <= 0.03
