import math

import numpy as np
import pytest

from ballspectral.basis import BasisSet, dim_pi
from ballspectral.galerkin import GalerkinSystem, ProblemSpec, assemble
from ballspectral.harness import convergence_summary
from ballspectral.mapping import identity_map
from ballspectral.problems import ellipsoid_case, planar_case, run_degree
from ballspectral.solve import (
    FactorizationError,
    SpectralSolution,
    ball_error_grid,
    condition_number,
    disk_error_grid,
    max_grid_error,
    solve_dense,
)

PLANAR_CASE = planar_case(0.5)


def _system(matrix, rhs, d=2, n=0):
    return GalerkinSystem(np.asarray(matrix, float), np.asarray(rhs, float), "helmholtz", BasisSet(d, n), identity_map(d), 4, None)


def test_identity_system_returns_rhs(rng):
    b = rng.standard_normal(6)
    sol = solve_dense(_system(np.eye(6), b, n=2))
    assert np.array_equal(sol.coefficients, b)


def test_random_spd_recovered(rng):
    B = rng.standard_normal((50, 50))
    M = B @ B.T + 50 * np.eye(50)
    alpha = rng.standard_normal(50)
    sol = solve_dense(_system(M, M @ alpha, n=8))
    assert np.max(np.abs(sol.coefficients - alpha)) < 1e-10


def test_nonsymmetric_falls_back_to_lu(rng):
    M = rng.standard_normal((10, 10)) + 10 * np.eye(10)
    M[0, 1] += 3.0
    alpha = rng.standard_normal(10)
    sol = solve_dense(_system(M, M @ alpha, n=3))
    assert np.allclose(sol.coefficients, alpha, atol=1e-12)


def test_singular_system_raises():
    M = np.ones((3, 3))
    with pytest.raises(FactorizationError):
        solve_dense(_system(M, [1.0, 2.0, 3.0], n=1))
    with pytest.raises(FactorizationError):
        solve_dense(_system([[np.nan]], [1.0]))


def test_trivial_solution_is_one():
    spec = ProblemSpec(identity_map(2), 0, lambda s: np.ones(len(s)), lambda s, nrm: np.zeros(len(s)), gamma=1.0)
    sol = solve_dense(assemble(spec))
    assert np.allclose(sol(disk_error_grid()), 1.0, atol=1e-14)


def test_condition_number_identity():
    assert condition_number(np.eye(7)) == pytest.approx(1.0)
    assert condition_number(np.diag([1.0, 0.0])) == math.inf


def test_condition_planar_degree_ten():
    cond = condition_number(assemble(PLANAR_CASE.problem(10)))
    assert 1819 / 2 <= cond <= 1819 * 2


def test_condition_ellipsoid_degree_eight():
    cond = condition_number(assemble(ellipsoid_case().problem(8)))
    assert 1335 / 2 <= cond <= 1335 * 2


def test_zero_coefficients_evaluate_to_zero():
    basis = BasisSet(2, 4)
    sol = SpectralSolution(np.zeros(basis.size), basis, identity_map(2), "helmholtz")
    assert np.all(sol(disk_error_grid()) == 0.0)


@pytest.mark.parametrize("d,value", [(2, 1 / math.sqrt(math.pi)), (3, math.sqrt(3 / (4 * math.pi)))])
def test_constant_member_evaluation(d, value):
    basis = BasisSet(d, 3)
    c = np.zeros(basis.size)
    c[0] = 1.0
    sol = SpectralSolution(c, basis, identity_map(d), "helmholtz")
    vals, s = sol.evaluate(np.vstack([np.zeros(d), 0.3 * np.ones(d)]))
    assert np.allclose(vals, value, atol=1e-15)
    assert np.allclose(s, np.vstack([np.zeros(d), 0.3 * np.ones(d)]))


def test_evaluation_outside_ball_rejected():
    basis = BasisSet(2, 2)
    sol = SpectralSolution(np.zeros(basis.size), basis, identity_map(2), "helmholtz")
    with pytest.raises(ValueError):
        sol.evaluate([[1.0, 0.1]])


def test_error_grids():
    g2 = disk_error_grid()
    assert g2.shape == (11 * 20, 2)
    assert np.max(np.linalg.norm(g2, axis=1)) == pytest.approx(1.0)
    g3 = ball_error_grid()
    assert g3.shape == (1 + 10 * 10 * 20, 3)
    assert np.all(np.linalg.norm(g3, axis=1) <= 1.0 + 1e-15)


def test_self_comparison_is_zero():
    sol = solve_dense(assemble(PLANAR_CASE.problem(6)))
    assert max_grid_error(sol, lambda s: sol(PLANAR_CASE.mapping.inverse(s))) < 1e-13


def test_planar_degree_twenty_error():
    report = run_degree(PLANAR_CASE, 20)
    assert report.max_error == pytest.approx(9.44e-8, rel=0.02)


def test_planar_degree_twenty_four_error():
    report = run_degree(PLANAR_CASE, 24)
    assert report.max_error == pytest.approx(1.24e-9, rel=0.05)
    assert report.N == dim_pi(2, 24) and report.q == 28 and report.cond >= 1


@pytest.fixture(scope="module")
def planar_sweep():
    return [run_degree(PLANAR_CASE, n) for n in range(2, 25, 2)]


def test_errors_strictly_decrease(planar_sweep):
    errs = [r.max_error for r in planar_sweep]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_exponential_rate(planar_sweep):
    s = convergence_summary(planar_sweep)
    assert s.error_slope < 0
    by_n = {r.n: r.max_error for r in planar_sweep}
    assert by_n[20] * 1e5 <= by_n[6]


def test_condition_growth_exponent(planar_sweep):
    s = convergence_summary(planar_sweep)
    assert 1.6 <= s.cond_exponent <= 2.4
