"""Dense solve, conditioning, evaluation and error measurement."""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .basis import BasisSet
from .galerkin import ConstrainedBasis, GalerkinSystem, mean_zero_projection
from .mapping import DomainMapping
from .quadrature import QuadratureRule, spherical_to_cartesian

RESIDUAL_TOL = 1e-10


class FactorizationError(np.linalg.LinAlgError):
    """The Galerkin matrix could not be factored or the solve is inaccurate."""


@dataclass(frozen=True)
class SpectralSolution:
    """u_n(x) = sum_k alpha_k phi_k(x) on the reference ball.

    In pure Poisson mode the sum runs over the shifted members
    phi_j - mean_j, j >= 1, held in ``constrained``.
    """

    coefficients: np.ndarray
    basis: BasisSet
    mapping: DomainMapping
    mode: str
    constrained: Optional[ConstrainedBasis] = None
    rule: Optional[QuadratureRule] = None
    residual: float = 0.0

    def evaluate(self, points):
        """Values of u_n at reference points and the matching physical points."""
        x = np.asarray(points, dtype=float).reshape(-1, self.basis.dimension)
        if np.any(np.linalg.norm(x, axis=1) > 1.0 + 1e-12):
            raise ValueError("evaluation points must lie in the closed unit ball")
        if self.constrained is None:
            vals = self.basis.values(x)
        else:
            vals, _ = self.constrained.evaluate(x)
        return vals @ self.coefficients, self.mapping.forward(x)

    def __call__(self, points):
        return self.evaluate(points)[0]


def solve_dense(system):
    """Cholesky solve, falling back to pivoted LU if the matrix is not SPD."""
    M, b = system.matrix, system.rhs
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(b))):
        raise FactorizationError("system contains non-finite entries")
    # Cholesky reads one triangle only, so it is reserved for symmetric input
    alpha = None
    if np.allclose(M, M.T, rtol=0.0, atol=1e-12 * np.abs(M).max()):
        try:
            alpha = sla.cho_solve(sla.cho_factor(M, lower=True, check_finite=False), b, check_finite=False)
        except np.linalg.LinAlgError:
            pass
    if alpha is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            try:
                lu = sla.lu_factor(M, check_finite=False)
            except (np.linalg.LinAlgError, ValueError) as exc:
                raise FactorizationError(str(exc)) from exc
        if np.any(np.diag(lu[0]) == 0.0):
            raise FactorizationError("matrix is singular")
        alpha = sla.lu_solve(lu, b, check_finite=False)
    bnorm = np.linalg.norm(b)
    res = float(np.linalg.norm(M @ alpha - b) / (bnorm if bnorm > 0 else 1.0))
    if not res < RESIDUAL_TOL:
        raise FactorizationError(f"relative residual {res:.2e} exceeds {RESIDUAL_TOL:g}")
    return SpectralSolution(
        alpha,
        system.basis,
        system.mapping,
        system.mode,
        system.constrained,
        system.rule,
        res,
    )


def condition_number(system):
    """2-norm condition number from the singular values."""
    M = system.matrix if isinstance(system, GalerkinSystem) else np.asarray(system)
    if not np.all(np.isfinite(M)):
        raise FactorizationError("matrix contains non-finite entries")
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] == 0.0:
        return math.inf
    return float(sv[0] / sv[-1])


def energy(solution, system):
    """alpha^T K alpha, the discrete energy of the Galerkin solution."""
    a = solution.coefficients
    return float(a @ system.matrix @ a)


# -- error grids --------------------------------------------------------------


def disk_error_grid():
    """Polar grid (i/10, j pi/10), i = 0..10, j = 1..20, as Cartesian points."""
    r = np.arange(11) / 10.0
    th = np.arange(1, 21) * np.pi / 10.0
    R, T = np.meshgrid(r, th, indexing="ij")
    return np.stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()], axis=1)


def ball_error_grid():
    """rho = i/10 (i=1..10), theta = (j-1/2) pi/10 (j=1..10), phi = k pi/10 (k=1..20), plus the origin."""
    rho = np.arange(1, 11) / 10.0
    theta = (np.arange(1, 11) - 0.5) * np.pi / 10.0
    phi = np.arange(1, 21) * np.pi / 10.0
    Rr, Tt, Pp = np.meshgrid(rho, theta, phi, indexing="ij")
    pts = spherical_to_cartesian(Tt.ravel(), Pp.ravel(), Rr.ravel())
    return np.vstack([np.zeros((1, 3)), pts])


def error_grid(d):
    return disk_error_grid() if d == 2 else ball_error_grid()


def max_grid_error(solution, exact, grid=None):
    """max |u*(Phi(x)) - u_n(x)| over the reference grid.

    ``exact`` takes physical points. In pure Poisson mode u* o Phi is first
    shifted to zero weighted mean; u_n is never shifted.
    """
    x = error_grid(solution.basis.dimension) if grid is None else np.asarray(grid, dtype=float)
    un, s = solution.evaluate(x)

    def pulled_back(y):
        return exact(solution.mapping.forward(y))

    if solution.constrained is not None:
        ref = mean_zero_projection(pulled_back, solution.mapping, solution.constrained.C, solution.rule)(x)
    else:
        ref = exact(s)
    return float(np.max(np.abs(ref - un)))


@dataclass(frozen=True)
class RunReport:
    n: int
    N: int
    max_error: float
    cond: float
    q: int
    seconds: float
