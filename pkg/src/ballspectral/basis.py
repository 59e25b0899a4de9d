"""Orthonormal polynomial bases of Pi_n on the unit disk and unit ball.

Disk (d=2): ridge polynomials ``U_n(x cos(kh) + y sin(kh)) / sqrt(pi)`` with
``h = pi/(n+1)``, ordered (0,0), (1,0), (1,1), (2,0), ...

Ball (d=3): ``c_{m,j} p_j^{(0, l+1/2)}(2|x|^2-1) |x|^l S_{beta,l}(x/|x|)`` with
``l = m - 2j`` and ``c_{m,j} = 2^{5/4 + m/2 - j}``, ordered by m, then j, then
beta. All indices here are 0-based.
"""

from dataclasses import dataclass, field
from math import comb, pi, sqrt

import numpy as np

from . import kernels


def dim_pi(d, n):
    """Dimension of the space of d-variate polynomials of total degree <= n."""
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    return comb(n + d, d)


# -- index bookkeeping ------------------------------------------------------


@dataclass(frozen=True, order=True)
class BasisIndex2D:
    degree_n: int
    angle_k: int

    def __post_init__(self):
        if self.degree_n < 0 or not 0 <= self.angle_k <= self.degree_n:
            raise ValueError(f"invalid disk index {self}")

    @property
    def linear(self):
        return self.degree_n * (self.degree_n + 1) // 2 + self.angle_k

    @classmethod
    def from_linear(cls, ell):
        if ell < 0:
            raise ValueError(f"linear index must be >= 0, got {ell}")
        n = int((sqrt(8 * ell + 1) - 1) // 2)
        # guard the float sqrt against off-by-one at triangular numbers
        while n * (n + 1) // 2 > ell:
            n -= 1
        while (n + 1) * (n + 2) // 2 <= ell:
            n += 1
        return cls(n, ell - n * (n + 1) // 2)


@dataclass(frozen=True, order=True)
class BasisIndex3D:
    degree_m: int
    radial_j: int
    harmonic_beta: int

    def __post_init__(self):
        m, j, b = self.degree_m, self.radial_j, self.harmonic_beta
        if m < 0 or not 0 <= j <= m // 2 or not 0 <= b <= 2 * (m - 2 * j):
            raise ValueError(f"invalid ball index {self}")

    @property
    def order_l(self):
        return self.degree_m - 2 * self.radial_j

    @property
    def linear(self):
        m, j, b = self.degree_m, self.radial_j, self.harmonic_beta
        # members of all degrees < m, then of degree m with radial index < j
        before = comb(m + 2, 3)
        before += sum(2 * (m - 2 * i) + 1 for i in range(j))
        return before + b

    @classmethod
    def from_linear(cls, ell):
        if ell < 0:
            raise ValueError(f"linear index must be >= 0, got {ell}")
        m = 0
        while comb(m + 3, 3) <= ell:
            m += 1
        rest = ell - comb(m + 2, 3)
        j = 0
        while rest >= 2 * (m - 2 * j) + 1:
            rest -= 2 * (m - 2 * j) + 1
            j += 1
        return cls(m, j, rest)


def disk_indices(n):
    return [BasisIndex2D(m, k) for m in range(n + 1) for k in range(m + 1)]


def ball_indices(n):
    return [
        BasisIndex3D(m, j, b)
        for m in range(n + 1)
        for j in range(m // 2 + 1)
        for b in range(2 * (m - 2 * j) + 1)
    ]


# -- univariate pieces ------------------------------------------------------


def chebyshev_u(n, t):
    """U_n(t) and U_n'(t) by the three-term recurrences."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    t = np.asarray(t, dtype=float)
    u_prev, u = np.zeros_like(t), np.ones_like(t)
    du_prev, du = np.zeros_like(t), np.zeros_like(t)
    for _ in range(n):
        u_prev, u = u, 2.0 * t * u - u_prev
        du_prev, du = du, 2.0 * u_prev + 2.0 * t * du - du_prev
    return u[()], du[()]


def jacobi_p(j, b, t):
    """Normalized Jacobi polynomial P_j^{(0,b)} and its derivative.

    Unit norm in L^2([-1, 1]) under the weight (1+t)^b.
    """
    if j < 0:
        raise ValueError(f"degree must be >= 0, got {j}")
    t = np.asarray(t, dtype=float)
    p_prev, p = np.zeros_like(t), np.ones_like(t)
    dp_prev, dp = np.zeros_like(t), np.zeros_like(t)
    if j >= 1:
        p_prev, p = p, 1.0 + (b + 2.0) * (t - 1.0) / 2.0
        dp_prev, dp = dp, np.full_like(t, (b + 2.0) / 2.0)
    for k in range(2, j + 1):
        s = 2.0 * k + b
        a1 = 2.0 * k * (k + b) * (s - 2.0)
        a2 = -(s - 1.0) * b * b
        a3 = (s - 1.0) * s * (s - 2.0)
        a4 = 2.0 * (k - 1.0) * (k + b - 1.0) * s
        p_prev, p, dp_prev, dp = (
            p,
            ((a2 + a3 * t) * p - a4 * p_prev) / a1,
            dp,
            (a3 * p + (a2 + a3 * t) * dp - a4 * dp_prev) / a1,
        )
    scale = sqrt((2 * j + b + 1.0) / 2.0 ** (b + 1.0))
    return (p * scale)[()], (dp * scale)[()]


def spherical_harmonic(beta, l, direction):
    """Real orthonormal spherical harmonic S_{beta,l} and its surface gradient.

    beta = 0 is the zonal member, 1..l carry cos(m phi), l+1..2l sin(m phi).
    """
    if l < 0 or not 0 <= beta <= 2 * l:
        raise ValueError(f"harmonic index beta={beta} out of range for l={l}")
    u = np.asarray(direction, dtype=float).reshape(-1, 3)
    norms = np.linalg.norm(u, axis=1)
    if not np.allclose(norms, 1.0, atol=1e-12):
        raise ValueError("direction must be a unit vector")
    Y, dY = kernels._solid_harmonics_numpy(u, l, kernels.solid_harmonic_norms(l))
    k = l * l + beta
    val = Y[:, k]
    grad = dY[:, k, :]
    # Euler: x . grad Y = l Y for a degree-l homogeneous polynomial
    surf = grad - l * val[:, None] * u
    if np.ndim(direction) == 1:
        return float(val[0]), surf[0]
    return val, surf


# -- single-member evaluation ----------------------------------------------


def ridge_eval(idx, point):
    """Value and gradient of one ridge polynomial at a disk point."""
    x, y = np.asarray(point, dtype=float)
    h = pi / (idx.degree_n + 1)
    c, s = np.cos(idx.angle_k * h), np.sin(idx.angle_k * h)
    u, du = chebyshev_u(idx.degree_n, x * c + y * s)
    return float(u) / sqrt(pi), np.array([c, s]) * (float(du) / sqrt(pi))


def ball_basis_eval(idx, point):
    """Value and gradient of one ball basis member at ``point``."""
    x = np.asarray(point, dtype=float).reshape(1, 3)
    l = idx.order_l
    Y, dY = kernels._solid_harmonics_numpy(x, l, kernels.solid_harmonic_norms(l))
    k = l * l + idx.harmonic_beta
    r2 = float(x[0] @ x[0])
    p, dp = jacobi_p(idx.radial_j, l + 0.5, 2.0 * r2 - 1.0)
    c = 2.0 ** (1.25 + idx.degree_m / 2.0 - idx.radial_j)
    val = c * p * Y[0, k]
    grad = c * (4.0 * dp * Y[0, k] * x[0] + p * dY[0, k])
    return float(val), grad


# -- whole basis ------------------------------------------------------------


@dataclass(frozen=True)
class BasisSet:
    """The ordered orthonormal basis of Pi_n on B_d."""

    dimension: int
    degree: int
    indices: tuple = field(init=False, repr=False)

    def __post_init__(self):
        size = dim_pi(self.dimension, self.degree)
        idx = disk_indices(self.degree) if self.dimension == 2 else ball_indices(self.degree)
        assert len(idx) == size
        object.__setattr__(self, "indices", tuple(idx))

    @property
    def size(self):
        return len(self.indices)

    def evaluate(self, points, use_jit=None):
        """Values (P, N) and gradients (P, N, d) at points of shape (P, d)."""
        points = np.asarray(points, dtype=float).reshape(-1, self.dimension)
        if self.dimension == 2:
            return kernels.ridge_basis(points, self.degree, use_jit)
        return kernels.ball_basis(points, self.degree, use_jit)

    def values(self, points):
        return self.evaluate(points)[0]
