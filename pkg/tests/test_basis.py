import math

import numpy as np
import pytest
from scipy.special import eval_jacobi, eval_legendre

from ballspectral.basis import (
    BasisIndex2D,
    BasisIndex3D,
    BasisSet,
    ball_basis_eval,
    chebyshev_u,
    dim_pi,
    jacobi_p,
    ridge_eval,
    spherical_harmonic,
)
from ballspectral.quadrature import ball_rule, disk_rule, gauss_legendre_01, sphere_boundary_rule, spherical_to_cartesian

from .conftest import random_ball_points


@pytest.mark.parametrize("d,n,expected", [(2, 2, 6), (2, 0, 1), (3, 16, 969), (3, 0, 1), (2, 24, 325)])
def test_dim_pi(d, n, expected):
    assert dim_pi(d, n) == expected


@pytest.mark.parametrize("d,n", [(1, 2), (4, 2), (2, -1)])
def test_dim_pi_rejects(d, n):
    with pytest.raises(ValueError):
        dim_pi(d, n)


def test_chebyshev_small_cases():
    assert chebyshev_u(0, 0.7) == (1.0, 0.0)
    assert chebyshev_u(1, 0.5) == (1.0, 2.0)
    v, _ = chebyshev_u(3, 0.5)
    # sin(4 theta) / sin(theta) at theta = pi/3
    assert v == pytest.approx(math.sin(4 * math.pi / 3) / math.sin(math.pi / 3), abs=1e-15)
    assert v == pytest.approx(-1.0, abs=1e-15)


def test_chebyshev_closed_form(rng):
    theta = rng.uniform(0.01, math.pi - 0.01, 50)
    for n in range(31):
        v, _ = chebyshev_u(n, np.cos(theta))
        ref = np.sin((n + 1) * theta) / np.sin(theta)
        assert np.max(np.abs(v - ref)) < 1e-12


def test_chebyshev_derivative_finite_difference(rng):
    t = rng.uniform(-0.95, 0.95, 20)
    h = 1e-6
    for n in range(1, 16):
        _, dv = chebyshev_u(n, t)
        fd = (chebyshev_u(n, t + h)[0] - chebyshev_u(n, t - h)[0]) / (2 * h)
        assert np.max(np.abs(dv - fd) / np.maximum(1.0, np.abs(fd))) < 1e-5


def test_ridge_eval_examples():
    v, g = ridge_eval(BasisIndex2D(0, 0), (0.3, -0.4))
    assert v == pytest.approx(1 / math.sqrt(math.pi), abs=1e-15)
    assert np.all(g == 0.0)
    v, g = ridge_eval(BasisIndex2D(1, 0), (0.3, -0.4))
    assert v == pytest.approx(2 * 0.3 / math.sqrt(math.pi), abs=1e-15)
    assert g == pytest.approx([2 / math.sqrt(math.pi), 0.0], abs=1e-15)


def test_ridge_eval_matches_basis_set(rng):
    basis = BasisSet(2, 6)
    pts = random_ball_points(rng, 2, 5)
    vals, grads = basis.evaluate(pts)
    for ell, idx in enumerate(basis.indices):
        for p in range(5):
            v, g = ridge_eval(idx, pts[p])
            assert v == pytest.approx(vals[p, ell], abs=1e-13)
            assert g == pytest.approx(grads[p, ell], abs=1e-12)


@pytest.mark.parametrize("n", range(0, 9))
def test_disk_gram_is_identity(n):
    basis = BasisSet(2, n)
    rule = disk_rule(n + 1)  # exact on Pi_{2n+2}
    V = basis.values(rule.nodes)
    G = V.T @ (V * rule.weights[:, None])
    assert np.max(np.abs(G - np.eye(basis.size))) < 1e-9


def test_disk_gram_degree_four_tight():
    basis = BasisSet(2, 4)
    rule = disk_rule(8)
    V = basis.values(rule.nodes)
    assert np.max(np.abs(V.T @ (V * rule.weights[:, None]) - np.eye(15))) < 1e-10


def test_jacobi_constant_member():
    for b in (0.5, 1.5, 4.5):
        v, dv = jacobi_p(0, b, 0.3)
        assert v == pytest.approx(math.sqrt((b + 1) / 2 ** (b + 1)), rel=1e-15)
        assert dv == 0.0


def test_jacobi_against_scipy(rng):
    t = rng.uniform(-1, 1, 25)
    for b in (0.5, 2.5, 7.5):
        for j in range(9):
            v, _ = jacobi_p(j, b, t)
            ref = eval_jacobi(j, 0.0, b, t) * math.sqrt((2 * j + b + 1) / 2 ** (b + 1))
            assert np.max(np.abs(v - ref)) < 1e-11 * max(1.0, np.abs(ref).max())


@pytest.mark.parametrize("b", [0.5, 1.5, 3.5])
def test_jacobi_orthonormality(b):
    # with t = 2 r^2 - 1 the weight (1+t)^b dt becomes 2^{b+2} r^{2b+1} dr,
    # a polynomial in r for half-integer b, so Gauss-Legendre in r is exact
    rule = gauss_legendre_01(20)
    r, w = rule.nodes, rule.weights
    t = 2 * r * r - 1
    weight = w * 2 ** (b + 2) * r ** (2 * b + 1)
    P = np.array([jacobi_p(j, b, t)[0] for j in range(5)])
    G = (P * weight) @ P.T
    assert np.max(np.abs(G - np.eye(5))) < 1e-12


def test_jacobi_derivative_fd():
    h = 1e-6
    for b in (0.5, 2.5):
        for j in range(1, 7):
            _, dv = jacobi_p(j, b, 0.3)
            fd = (jacobi_p(j, b, 0.3 + h)[0] - jacobi_p(j, b, 0.3 - h)[0]) / (2 * h)
            assert abs(dv - fd) <= 1e-6 * max(1.0, abs(fd))


def test_jacobi_rejects_negative():
    with pytest.raises(ValueError):
        jacobi_p(-1, 0.5, 0.0)


def test_spherical_harmonic_constant():
    v, g = spherical_harmonic(0, 0, [0.0, 0.6, 0.8])
    assert v == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)
    assert np.allclose(g, 0.0)


def test_spherical_harmonic_rejects_bad_index():
    with pytest.raises(ValueError):
        spherical_harmonic(5, 2, [0, 0, 1])
    with pytest.raises(ValueError):
        spherical_harmonic(0, 1, [0, 0, 2])


def test_spherical_harmonic_gram():
    rule = sphere_boundary_rule(6)
    dirs = spherical_to_cartesian(rule.nodes[:, 0], rule.nodes[:, 1])
    rows = []
    for l in range(4):
        for beta in range(2 * l + 1):
            rows.append(spherical_harmonic(beta, l, dirs)[0])
    S = np.array(rows)
    G = (S * rule.weights) @ S.T
    assert np.max(np.abs(G - np.eye(16))) < 1e-10


def test_zonal_harmonic_is_legendre(rng):
    theta = rng.uniform(0, math.pi, 12)
    phi = rng.uniform(0, 2 * math.pi, 12)
    dirs = spherical_to_cartesian(theta, phi)
    for l in range(8):
        v, _ = spherical_harmonic(0, l, dirs)
        ref = math.sqrt((2 * l + 1) / (4 * math.pi)) * eval_legendre(l, np.cos(theta))
        assert np.max(np.abs(v - ref)) < 1e-12


def test_spherical_harmonic_parity(rng):
    dirs = rng.standard_normal((10, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    for l in range(6):
        for beta in range(2 * l + 1):
            a, _ = spherical_harmonic(beta, l, dirs)
            b, _ = spherical_harmonic(beta, l, -dirs)
            assert np.max(np.abs(b - (-1) ** l * a)) < 1e-12


def test_surface_gradient_is_tangent(rng):
    dirs = rng.standard_normal((8, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    _, g = spherical_harmonic(3, 3, dirs)
    assert np.max(np.abs(np.einsum("pi,pi->p", g, dirs))) < 1e-12


def test_ball_constant_member():
    v, g = ball_basis_eval(BasisIndex3D(0, 0, 0), [0.1, 0.2, -0.3])
    # c_00 p_0^{(0,1/2)} S_00 = 2^{5/4} sqrt(3/2 / 2^{3/2}) / sqrt(4 pi) = sqrt(3 / (4 pi))
    assert v == pytest.approx(math.sqrt(3 / (4 * math.pi)), rel=1e-14)
    assert np.allclose(g, 0.0)
    assert v**2 * 4 * math.pi / 3 == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("n", range(0, 6))
def test_ball_gram_is_identity(n):
    basis = BasisSet(3, n)
    rule = ball_rule(n + 1)
    V = basis.values(rule.nodes)
    G = V.T @ (V * rule.weights[:, None])
    assert np.max(np.abs(G - np.eye(basis.size))) < 1e-9


@pytest.mark.parametrize("n", [6, 8])
def test_ball_gram_higher_degree(n):
    basis = BasisSet(3, n)
    rule = ball_rule(n)
    V = basis.values(rule.nodes)
    assert np.max(np.abs(V.T @ (V * rule.weights[:, None]) - np.eye(basis.size))) < 1e-9


def test_ball_single_member_matches_set(rng):
    basis = BasisSet(3, 5)
    pts = random_ball_points(rng, 3, 4)
    vals, grads = basis.evaluate(pts)
    for ell, idx in enumerate(basis.indices):
        for p in range(4):
            v, g = ball_basis_eval(idx, pts[p])
            assert v == pytest.approx(vals[p, ell], abs=1e-12)
            assert g == pytest.approx(grads[p, ell], abs=1e-11)


def _fd_gradient(basis, pts, h=1e-6):
    d = basis.dimension
    out = np.empty(pts.shape[:1] + (basis.size, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        out[:, :, k] = (basis.values(pts + e) - basis.values(pts - e)) / (2 * h)
    return out


@pytest.mark.parametrize("d,n", [(2, 10), (3, 7)])
def test_gradients_match_finite_differences(rng, d, n):
    basis = BasisSet(d, n)
    pts = random_ball_points(rng, d, 100, radius=0.97)
    _, grads = basis.evaluate(pts)
    fd = _fd_gradient(basis, pts)
    rel = np.abs(grads - fd) / np.maximum(1.0, np.abs(fd))
    assert rel.max() < 1e-5


def test_ball_gradient_example_point():
    basis = BasisSet(3, 6)
    x = np.array([[0.3, -0.2, 0.5]])
    _, g = basis.evaluate(x)
    fd = _fd_gradient(basis, x)
    assert np.max(np.abs(g - fd) / np.maximum(1.0, np.abs(fd))) < 1e-6


def test_index_round_trip_2d():
    ell = 0
    for n in range(26):
        for k in range(n + 1):
            idx = BasisIndex2D(n, k)
            assert idx.linear == ell
            assert BasisIndex2D.from_linear(ell) == idx
            ell += 1
    assert ell == dim_pi(2, 25)


def test_index_round_trip_3d():
    basis = BasisSet(3, 25)
    assert basis.size == dim_pi(3, 25)
    for ell, idx in enumerate(basis.indices):
        assert idx.linear == ell
        assert BasisIndex3D.from_linear(ell) == idx


def test_invalid_indices():
    with pytest.raises(ValueError):
        BasisIndex2D(2, 3)
    with pytest.raises(ValueError):
        BasisIndex3D(3, 2, 0)
    with pytest.raises(ValueError):
        BasisIndex3D(2, 1, 1)


def test_origin_and_boundary_values_finite():
    for d, n in ((2, 12), (3, 10)):
        basis = BasisSet(d, n)
        pts = np.vstack([np.zeros(d), np.eye(d), -np.eye(d)])
        v, g = basis.evaluate(pts)
        assert np.all(np.isfinite(v)) and np.all(np.isfinite(g))
