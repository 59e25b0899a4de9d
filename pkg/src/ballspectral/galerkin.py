"""Assembly of the Galerkin system for -Lap u + gamma u = f, du/dn = g.

The problem on the physical domain is pulled back to the unit ball through
the mapping, so every integral is a reference-ball (or reference-sphere)
quadrature:

    K[l, k] = sum_q w |det J| grad(phi_l)^T A grad(phi_k)
    M[l, k] = sum_q w |det J| gamma(Phi) phi_l phi_k
    b[l]    = sum_q w |det J| f(Phi) phi_l + sum_bdy w |J_bdy| g phi_l

Two modes. ``"helmholtz"`` needs gamma > 0 and solves for all N
coefficients. ``"poisson"`` drops gamma, works in the zero-weighted-mean
basis phi_j - mean_j (j >= 1) and has N-1 unknowns.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .basis import BasisSet
from .mapping import DomainMapping, coefficient_matrix
from .quadrature import (
    QuadratureRule,
    ball_rule,
    circle_boundary_rule,
    disk_rule,
    sphere_boundary_rule,
)

log = logging.getLogger(__name__)

MODES = ("helmholtz", "poisson")

# nodes per chunk during assembly; bounds the (P, N, d) gradient buffer
CHUNK = 2048


class QuadratureOrderWarning(UserWarning):
    pass


class CompatibilityWarning(UserWarning):
    pass


def default_quad_order(n):
    return n + 4


@dataclass(frozen=True)
class ProblemSpec:
    """Data of one Neumann problem on the mapped domain.

    ``f(s)`` and ``gamma(s)`` take physical points of shape (P, d).
    ``g(s, normal)`` also receives the outward unit normals there, so flux
    data manufactured from an exact solution can be passed as grad(u).n.
    ``gamma`` may be a positive constant.
    """

    mapping: DomainMapping
    degree: int
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    gamma: Union[Callable[[np.ndarray], np.ndarray], float, None] = None
    mode: str = "helmholtz"
    quad_order: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        zero_gamma = self.gamma is None or (not callable(self.gamma) and float(self.gamma) == 0.0)
        if self.mode == "poisson" and not zero_gamma:
            raise ValueError("pure Poisson mode requires gamma to be zero")
        if self.mode == "helmholtz" and zero_gamma:
            raise ValueError("gamma = 0 is not uniquely solvable; use mode='poisson'")
        if self.quad_order is not None and self.quad_order < 1:
            raise ValueError(f"quadrature order must be >= 1, got {self.quad_order}")

    @property
    def dimension(self):
        return self.mapping.dimension

    @property
    def q(self):
        return self.quad_order if self.quad_order is not None else default_quad_order(self.degree)

    def gamma_at(self, s):
        if self.gamma is None:
            return np.zeros(s.shape[0])
        if callable(self.gamma):
            return np.asarray(self.gamma(s), dtype=float)
        return np.full(s.shape[0], float(self.gamma))


def volume_rule(d, q):
    return disk_rule(q) if d == 2 else ball_rule(q)


def boundary_rule(d, q):
    return circle_boundary_rule(q) if d == 2 else sphere_boundary_rule(q)


def _boundary_weights(mapping, rule):
    # sphere rule weights already carry sin(theta); use the smooth ratio
    return rule.weights * mapping.boundary_area_ratio(rule.nodes)


@dataclass(frozen=True)
class ConstrainedBasis:
    """phi_hat_j = phi_j - mean_j for j >= 1, mean_j = (1/C) int phi_j |det J|."""

    basis: BasisSet
    means: np.ndarray
    C: float

    @property
    def size(self):
        return self.basis.size - 1

    def evaluate(self, points):
        vals, grads = self.basis.evaluate(points)
        return vals[:, 1:] - self.means[1:], grads[:, 1:]


def _weighted_moments(basis, mapping, rule):
    """int_B phi_j |det J| dx for all j, and C = int_B |det J| dx."""
    mom = np.zeros(basis.size)
    C = 0.0
    for sl in _chunks(len(rule)):
        x = rule.nodes[sl]
        _, det = coefficient_matrix(mapping, x)
        wd = rule.weights[sl] * det
        mom += basis.values(x).T @ wd
        C += wd.sum()
    return mom, C


def constrained_basis(basis, mapping, q):
    """Zero-weighted-mean basis for the pure Poisson problem, and C = ||det J||_1."""
    probe = np.array([[0.0] * basis.dimension, [0.3] + [-0.2] * (basis.dimension - 1)])
    first = basis.values(probe)[:, 0]
    if first[0] == 0.0 or not np.isclose(first[0], first[1], rtol=1e-13, atol=0.0):
        raise ValueError("first basis member must be a nonzero constant")
    mom, C = _weighted_moments(basis, mapping, volume_rule(basis.dimension, q))
    return ConstrainedBasis(basis, mom / C, float(C)), float(C)


@dataclass(frozen=True)
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    mode: str
    basis: BasisSet
    mapping: DomainMapping
    quad_order: int
    rule: QuadratureRule
    constrained: Optional[ConstrainedBasis] = None
    # int f |det J| + int g |J_bdy|, i.e. the load applied to the constant 1
    load_on_one: float = 0.0

    @property
    def C(self):
        return None if self.constrained is None else self.constrained.C

    @property
    def size(self):
        return self.rhs.shape[0]


def _chunks(n, size=CHUNK):
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


def assemble(spec):
    """Build the dense Galerkin matrix and load vector for ``spec``."""
    d, n, q = spec.dimension, spec.degree, spec.q
    if q < n + 1:
        warnings.warn(
            f"quadrature order q={q} is below n+1={n + 1}; system may be inaccurate",
            QuadratureOrderWarning,
            stacklevel=2,
        )
    basis = BasisSet(d, n)
    mapping = spec.mapping
    mapping.verify_invertible()
    rule = volume_rule(d, q)
    N = basis.size

    K = np.zeros((N, N))
    M = np.zeros((N, N))
    b = np.zeros(N)
    mom = np.zeros(N)
    C = 0.0
    vol_load = 0.0
    poisson = spec.mode == "poisson"

    for sl in _chunks(len(rule)):
        x = rule.nodes[sl]
        V, G = basis.evaluate(x)
        A, det = coefficient_matrix(mapping, x)
        s = mapping.forward(x)
        wd = rule.weights[sl] * det
        P = x.shape[0]
        AG = np.einsum("pij,pnj->pni", A, G)
        Gw = (G * wd[:, None, None]).transpose(1, 0, 2).reshape(N, P * d)
        K += Gw @ AG.transpose(1, 0, 2).reshape(N, P * d).T
        if not poisson:
            M += (V * (wd * spec.gamma_at(s))[:, None]).T @ V
        fw = wd * np.asarray(spec.f(s), dtype=float)
        b += V.T @ fw
        vol_load += fw.sum()
        mom += V.T @ wd
        C += wd.sum()

    brule = boundary_rule(d, q)
    xb = mapping.boundary_points(brule.nodes)
    normals, sb = mapping.boundary_normals(brule.nodes)
    gw = _boundary_weights(mapping, brule) * np.asarray(spec.g(sb, normals), dtype=float)
    b += basis.values(xb).T @ gw
    bdy_load = float(gw.sum())
    load_one = float(vol_load + bdy_load)

    if not poisson:
        matrix, rhs, cb = K + M, b, None
    else:
        if abs(load_one) > compatibility_tolerance(vol_load, bdy_load):
            warnings.warn(
                f"data violate the compatibility condition: int f + int g = {load_one:.3e}",
                CompatibilityWarning,
                stacklevel=2,
            )
        cb = ConstrainedBasis(basis, mom / C, float(C))
        # l(phi_j - mean_j) = l(phi_j) - mean_j l(1); gradients are unchanged
        matrix = K[1:, 1:].copy()
        rhs = b[1:] - cb.means[1:] * load_one
    log.debug("assembled %s system: n=%d N=%d q=%d nodes=%d", spec.mode, n, rhs.size, q, len(rule))
    return GalerkinSystem(matrix, rhs, spec.mode, basis, mapping, q, rule, cb, load_one)


def _load_integrals(spec):
    d, q = spec.dimension, spec.q
    mapping = spec.mapping
    rule = volume_rule(d, q)
    _, det = coefficient_matrix(mapping, rule.nodes)
    vol = float(np.sum(rule.weights * det * spec.f(mapping.forward(rule.nodes))))
    brule = boundary_rule(d, q)
    normals, sb = mapping.boundary_normals(brule.nodes)
    bdy = float(np.sum(_boundary_weights(mapping, brule) * spec.g(sb, normals)))
    return vol, bdy


def compatibility_check(spec):
    """int_Omega f ds + int_dOmega g ds, evaluated on the reference ball.

    Zero (to quadrature accuracy) is necessary and sufficient for the pure
    Poisson problem to be solvable. The caller decides on a tolerance.
    """
    vol, bdy = _load_integrals(spec)
    return vol + bdy


def compatibility_tolerance(vol, bdy):
    return 1e-8 * (abs(vol) + abs(bdy) + 1.0)


def mean_zero_projection(u, mapping, C, rule):
    """Return P u: x -> u(x) - (1/C) int_B |det J| u dy.

    ``u`` is a callable on reference points; the integral uses ``rule``.
    """
    _, det = coefficient_matrix(mapping, rule.nodes)
    mean = float(np.sum(rule.weights * det * np.asarray(u(rule.nodes), dtype=float))) / C

    def projected(x):
        return np.asarray(u(x), dtype=float) - mean

    projected.mean = mean
    return projected
