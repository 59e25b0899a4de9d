"""Quadrature on [0, 1], the unit disk, the unit ball and their boundaries."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a fixed rule.

    ``nodes`` has shape (M, dim) for volume rules and for the sphere
    parameter rule, (M,) for rules in a single parameter.
    ``exactness_degree`` is the total polynomial degree integrated exactly
    (for the periodic boundary rules it is the trigonometric degree).
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def __len__(self):
        return self.weights.shape[0]

    def integrate(self, values):
        """Apply the rule to sampled values; leading axis runs over nodes."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def _legendre_newton(npts, tol=1e-15, maxiter=100):
    """Gauss-Legendre nodes and weights on [-1, 1] by Newton's method."""
    k = np.arange(1, npts + 1)
    x = np.cos(np.pi * (k - 0.25) / (npts + 0.5))
    for _ in range(maxiter):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, npts + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = npts * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    # derivative at the converged nodes
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, npts + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = npts * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


def gauss_legendre(npts):
    """``npts``-point Gauss-Legendre rule on [-1, 1]."""
    if npts < 1:
        raise ValueError(f"need at least one node, got {npts}")
    return _legendre_newton(npts)


def gauss_legendre_01(q):
    """(q+1)-point Gauss-Legendre rule on [0, 1], exact to degree 2q+1."""
    if q < 0:
        raise ValueError(f"order q must be >= 0, got {q}")
    x, w = gauss_legendre(q + 1)
    return QuadratureRule(0.5 * (x + 1.0), 0.5 * w, 2 * q + 1)


def _trapezoid_angles(q):
    m = 2 * q + 1
    return 2.0 * np.pi * np.arange(m) / m, np.full(m, 2.0 * np.pi / m)


def disk_rule(q):
    """Product rule on the unit disk: Gauss-Legendre in r, trapezoid in angle.

    (q+1)(2q+1) nodes, exact on Pi_{2q}.
    """
    if q < 1:
        raise ValueError(f"disk rule needs q >= 1, got {q}")
    radial = gauss_legendre_01(q)
    theta, wt = _trapezoid_angles(q)
    r = radial.nodes[:, None]
    nodes = np.stack(
        [(r * np.cos(theta)).ravel(), (r * np.sin(theta)).ravel()], axis=1
    )
    weights = ((radial.weights * radial.nodes)[:, None] * wt).ravel()
    return QuadratureRule(nodes, weights, 2 * q)


def ball_rule(q):
    """Product rule on the unit ball, exact on Pi_{2q}.

    Radius: (q+2)-point Gauss-Legendre on [0, 1] with r^2 folded into the
    weights; polar angle: (q+1)-point Gauss-Legendre in cos(theta);
    azimuth: trapezoid with 2q+1 points.
    """
    if q < 1:
        raise ValueError(f"ball rule needs q >= 1, got {q}")
    # r^{k+2} with k = 2q needs radial exactness 2q+2
    radial = gauss_legendre_01(q + 1)
    sph = sphere_boundary_rule(q)
    dirs = spherical_to_cartesian(sph.nodes[:, 0], sph.nodes[:, 1])
    r = radial.nodes
    nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    weights = np.outer(radial.weights * r * r, sph.weights).ravel()
    return QuadratureRule(nodes, weights, 2 * q)


def circle_boundary_rule(q):
    """Trapezoid rule in theta on [0, 2pi) with 2q+1 nodes."""
    if q < 1:
        raise ValueError(f"boundary rule needs q >= 1, got {q}")
    theta, w = _trapezoid_angles(q)
    return QuadratureRule(theta, w, 2 * q)


def sphere_boundary_rule(q):
    """Rule in (theta, phi) against the surface measure sin(theta) dtheta dphi.

    Gauss-Legendre in cos(theta) with q+1 nodes times trapezoid in phi with
    2q+1 nodes; polar nodes are strictly interior, so theta never hits a pole.
    Exact for spherical polynomials of degree <= 2q.
    """
    if q < 1:
        raise ValueError(f"boundary rule needs q >= 1, got {q}")
    c, wc = gauss_legendre(q + 1)
    phi, wp = _trapezoid_angles(q)
    theta = np.arccos(c)
    nodes = np.stack(
        [np.repeat(theta, phi.size), np.tile(phi, theta.size)], axis=1
    )
    weights = np.outer(wc, wp).ravel()
    return QuadratureRule(nodes, weights, 2 * q)


def spherical_to_cartesian(theta, phi, rho=1.0):
    """Upsilon(rho, theta, phi) = rho (sin t cos p, sin t sin p, cos t)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    out = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)
    return np.asarray(rho, dtype=float)[..., None] * out
