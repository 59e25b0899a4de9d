"""Smooth invertible maps from the closed unit ball onto the physical domain.

A :class:`DomainMapping` bundles the forward map, its analytic Jacobian and
optionally the inverse. Everything is vectorized over points of shape
(P, d). Boundary parameters are theta in [0, 2pi) for d=2 and
(theta, phi) in [0, pi] x [0, 2pi) for d=3.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .quadrature import spherical_to_cartesian

SINGULAR_TOL = 1e-13


class SingularJacobianError(ValueError):
    """Raised where |det J| falls below the singularity threshold."""


@dataclass(frozen=True)
class DomainMapping:
    dimension: int
    forward: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    inverse: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")

    def __call__(self, x):
        return self.forward(_points(x, self.dimension))

    # -- boundary -----------------------------------------------------------

    def boundary_points(self, param):
        """Points of the unit sphere/circle for the given boundary parameters."""
        if self.dimension == 2:
            theta = np.asarray(param, dtype=float).reshape(-1)
            return np.stack([np.cos(theta), np.sin(theta)], axis=1)
        tp = np.asarray(param, dtype=float).reshape(-1, 2)
        return spherical_to_cartesian(tp[:, 0], tp[:, 1])

    def _boundary_frame(self, param):
        # Tangents of the image boundary; in 3D the phi-tangent uses the
        # unit e_phi, so it lacks the sin(theta) factor of the true partial.
        x = self.boundary_points(param)
        J = self.jacobian(x)
        if self.dimension == 2:
            tau = np.stack([-x[:, 1], x[:, 0]], axis=1)
            return x, J, (np.einsum("pij,pj->pi", J, tau),)
        tp = np.asarray(param, dtype=float).reshape(-1, 2)
        th, ph = tp[:, 0], tp[:, 1]
        e_th = np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)], axis=1)
        e_ph = np.stack([-np.sin(ph), np.cos(ph), np.zeros_like(ph)], axis=1)
        return x, J, (
            np.einsum("pij,pj->pi", J, e_th),
            np.einsum("pij,pj->pi", J, e_ph),
        )

    def boundary_factor(self, param):
        """|chi'(theta)| in 2D, |(Phi o Upsilon)_theta x (Phi o Upsilon)_phi| in 3D."""
        if self.dimension == 2:
            _, _, (tangent,) = self._boundary_frame(param)
            return np.linalg.norm(tangent, axis=1)
        tp = np.asarray(param, dtype=float).reshape(-1, 2)
        return np.sin(tp[:, 0]) * self.boundary_area_ratio(param)

    def boundary_area_ratio(self, param):
        """Surface element of the image relative to the unit-sphere element.

        Equals boundary_factor / sin(theta) in 3D but stays finite at the poles.
        In 2D this is the same as boundary_factor.
        """
        if self.dimension == 2:
            return self.boundary_factor(param)
        _, _, (t1, t2) = self._boundary_frame(param)
        return np.linalg.norm(np.cross(t1, t2), axis=1)

    def boundary_normals(self, param):
        """Outward unit normals of the image boundary, and the image points."""
        x, J, tangents = self._boundary_frame(param)
        sign = np.sign(np.linalg.det(J))
        if self.dimension == 2:
            (t,) = tangents
            n = np.stack([t[:, 1], -t[:, 0]], axis=1)
        else:
            n = np.cross(tangents[0], tangents[1])
        n *= (sign / np.linalg.norm(n, axis=1))[:, None]
        return n, self.forward(x)

    # -- checks -------------------------------------------------------------

    def verify_invertible(self, samples=12000, seed=0):
        """Sample det J on a dense set of points of the closed ball.

        Returns the smallest |det J| seen. Raises SingularJacobianError if
        it drops below the threshold or det J changes sign.
        """
        x = _sample_ball(self.dimension, samples, seed)
        det = np.linalg.det(self.jacobian(x))
        if np.min(np.abs(det)) < SINGULAR_TOL:
            raise SingularJacobianError(f"{self.name}: det J vanishes on the sampling set")
        if np.any(det > 0) and np.any(det < 0):
            raise SingularJacobianError(f"{self.name}: det J changes sign, map not invertible")
        return float(np.min(np.abs(det)))


def _points(x, d):
    return np.asarray(x, dtype=float).reshape(-1, d)


def _sample_ball(d, samples, seed):
    rng = np.random.default_rng(seed)
    # interior points plus a layer on the boundary
    nb = samples // 5
    g = rng.standard_normal((samples, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = rng.uniform(0.0, 1.0, samples) ** (1.0 / d)
    r[:nb] = 1.0
    return g * r[:, None]


def _inverse_and_det(J):
    """Explicit inverse and determinant of a stack of 2x2 or 3x3 matrices."""
    d = J.shape[-1]
    if d == 2:
        a, b = J[:, 0, 0], J[:, 0, 1]
        c, e = J[:, 1, 0], J[:, 1, 1]
        det = a * e - b * c
        adj = np.stack([np.stack([e, -b], -1), np.stack([-c, a], -1)], -2)
    else:
        c0, c1, c2 = J[:, :, 0], J[:, :, 1], J[:, :, 2]
        r0, r1, r2 = np.cross(c1, c2), np.cross(c2, c0), np.cross(c0, c1)
        det = np.einsum("pi,pi->p", c0, r0)
        adj = np.stack([r0, r1, r2], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = adj / det[:, None, None]
    return inv, det


def coefficient_matrix(mapping, x):
    """A(x) = J^{-1} J^{-T} and |det J(x)| at the given reference points."""
    x = _points(x, mapping.dimension)
    inv, det = _inverse_and_det(mapping.jacobian(x))
    absdet = np.abs(det)
    if np.any(~(absdet >= SINGULAR_TOL)):
        bad = x[np.argmin(np.nan_to_num(absdet, nan=0.0))]
        raise SingularJacobianError(f"{mapping.name}: |det J| < {SINGULAR_TOL} near x={bad}")
    A = np.einsum("pik,pjk->pij", inv, inv)
    A = 0.5 * (A + np.swapaxes(A, 1, 2))
    return A, absdet


# -- concrete maps ------------------------------------------------------------


def identity_map(d):
    def forward(x):
        return np.array(_points(x, d), copy=True)

    def jac(x):
        x = _points(x, d)
        return np.broadcast_to(np.eye(d), (x.shape[0], d, d)).copy()

    return DomainMapping(d, forward, jac, inverse=forward, name=f"identity{d}d")


def planar_quadratic_map(a):
    """(s, t) = (x - y + a x^2, x + y), one-to-one on the closed disk for 0 < a < 1."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"parameter a must lie in (0, 1), got {a}")

    def forward(x):
        x = _points(x, 2)
        u, v = x[:, 0], x[:, 1]
        return np.stack([u - v + a * u * u, u + v], axis=1)

    def jac(x):
        x = _points(x, 2)
        J = np.empty((x.shape[0], 2, 2))
        J[:, 0, 0] = 1.0 + 2.0 * a * x[:, 0]
        J[:, 0, 1] = -1.0
        J[:, 1, 0] = 1.0
        J[:, 1, 1] = 1.0
        return J

    def inverse(s):
        s = _points(s, 2)
        w = -1.0 + np.sqrt(1.0 + a * (s[:, 0] + s[:, 1]))
        return np.stack([w / a, (a * s[:, 1] - w) / a], axis=1)

    return DomainMapping(2, forward, jac, inverse, name="planar-quadratic", params={"a": a})


ELLIPSOID_MATRIX = np.array([[1.0, -3.0, 0.0], [2.0, 1.0, 0.0], [1.0, 1.0, 1.0]])


def linear_map_3d(M):
    """Phi(x) = M x; maps the ball onto an ellipsoid."""
    M = np.array(M, dtype=float)
    if M.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {M.shape}")
    det = np.linalg.det(M)
    if abs(det) < SINGULAR_TOL:
        raise SingularJacobianError("linear map matrix is singular")
    Minv = np.linalg.inv(M)

    def forward(x):
        return _points(x, 3) @ M.T

    def jac(x):
        return np.broadcast_to(M, (_points(x, 3).shape[0], 3, 3)).copy()

    def inverse(s):
        return _points(s, 3) @ Minv.T

    return DomainMapping(3, forward, jac, inverse, name="linear3d", params={"M": M})


@dataclass(frozen=True)
class StarSurface:
    """Boundary radius R(theta, phi) of a star-shaped domain with its partials."""

    radius: Callable
    d_theta: Callable
    d_phi: Callable


def test_surface_R(theta, phi):
    """R = 2 + 3/4 cos(2 phi) sin^2(theta) (7 cos^2(theta) - 1)."""
    st2 = np.sin(theta) ** 2
    ct2 = np.cos(theta) ** 2
    return 2.0 + 0.75 * np.cos(2.0 * phi) * st2 * (7.0 * ct2 - 1.0)


def _test_surface_dtheta(theta, phi):
    s, c = np.sin(theta), np.cos(theta)
    # d/dtheta [s^2 (7 c^2 - 1)] = 2 s c (7 c^2 - 1) - 14 s^3 c
    return 0.75 * np.cos(2.0 * phi) * (2.0 * s * c * (7.0 * c * c - 1.0) - 14.0 * s**3 * c)


def _test_surface_dphi(theta, phi):
    st2 = np.sin(theta) ** 2
    return -1.5 * np.sin(2.0 * phi) * st2 * (7.0 * np.cos(theta) ** 2 - 1.0)


TEST_SURFACE = StarSurface(test_surface_R, _test_surface_dtheta, _test_surface_dphi)


def constant_surface(c):
    def radius(theta, phi):
        return np.full(np.broadcast(theta, phi).shape, float(c))

    def zero(theta, phi):
        return np.zeros(np.broadcast(theta, phi).shape)

    return StarSurface(radius, zero, zero)


def blend_profile(rho, e_s):
    """t(rho) = 0 on [0, 1/2], (2 rho - 1)^e_s above, and its derivative."""
    rho = np.asarray(rho, dtype=float)
    w = np.clip(2.0 * rho - 1.0, 0.0, None)
    return w**e_s, 2.0 * e_s * w ** (e_s - 1)


def star_radial_profile(surface, e_s, rho, theta, phi):
    """R~ = t R + (1 - t) rho and dR~/drho = t' (R - rho) + 1 - t."""
    t, dt = blend_profile(rho, e_s)
    R = surface.radius(theta, phi)
    return t * R + (1.0 - t) * rho, dt * (R - rho) + 1.0 - t


def star_shaped_map(surface=TEST_SURFACE, e_s=5, check_samples=(40, 80)):
    """Map the ball onto {Upsilon(rho, theta, phi) : rho <= R(theta, phi)}.

    The map is the identity on |x| <= 1/2 and blends to the boundary radius
    on the outer shell with a C^{e_s - 1} profile.
    """
    if int(e_s) != e_s or e_s < 2:
        raise ValueError(f"smoothness exponent e_s must be an integer >= 2, got {e_s}")
    e_s = int(e_s)
    nt, npf = check_samples
    tg, pg = np.meshgrid(
        np.linspace(0.0, np.pi, nt), np.linspace(0.0, 2.0 * np.pi, npf, endpoint=False), indexing="ij"
    )
    rmin = float(np.min(surface.radius(tg, pg)))
    if rmin <= 1.0:
        raise ValueError(f"boundary radius must exceed 1 everywhere, found min {rmin:.6g}")

    def _spherical(x):
        rho = np.linalg.norm(x, axis=1)
        safe = np.where(rho > 0.0, rho, 1.0)
        theta = np.arccos(np.clip(x[:, 2] / safe, -1.0, 1.0))
        phi = np.arctan2(x[:, 1], x[:, 0])
        return rho, theta, phi

    def forward(x):
        x = _points(x, 3)
        rho, theta, phi = _spherical(x)
        out = x.copy()
        outer = rho > 0.5
        if np.any(outer):
            Rt, _ = star_radial_profile(surface, e_s, rho[outer], theta[outer], phi[outer])
            out[outer] = x[outer] * (Rt / rho[outer])[:, None]
        return out

    def jac(x):
        x = _points(x, 3)
        J = np.broadcast_to(np.eye(3), (x.shape[0], 3, 3)).copy()
        rho, theta, phi = _spherical(x)
        outer = rho > 0.5
        if not np.any(outer):
            return J
        r, th, ph = rho[outer], theta[outer], phi[outer]
        t, _ = blend_profile(r, e_s)
        Rt, Rt_rho = star_radial_profile(surface, e_s, r, th, ph)
        st, ct, sp, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
        omega = x[outer] / r[:, None]
        e_th = np.stack([ct * cp, ct * sp, -st], axis=1)
        e_ph = np.stack([-sp, cp, np.zeros_like(sp)], axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            dphi_term = np.where(st > 0.0, surface.d_phi(th, ph) / st, 0.0)
        grad_Rt = (
            Rt_rho[:, None] * omega
            + (t * surface.d_theta(th, ph) / r)[:, None] * e_th
            + (t * dphi_term / r)[:, None] * e_ph
        )
        proj = np.eye(3) - np.einsum("pi,pj->pij", omega, omega)
        J[outer] = np.einsum("pi,pj->pij", omega, grad_Rt) + (Rt / r)[:, None, None] * proj
        return J

    return DomainMapping(3, forward, jac, None, name="star", params={"e_s": e_s, "surface": surface})
