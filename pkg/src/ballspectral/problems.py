"""Built-in manufactured-solution cases and the single-degree run driver."""

import time
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .basis import dim_pi
from .galerkin import ProblemSpec, assemble
from .mapping import (
    ELLIPSOID_MATRIX,
    TEST_SURFACE,
    DomainMapping,
    linear_map_3d,
    planar_quadratic_map,
    star_shaped_map,
)
from .solve import RunReport, condition_number, max_grid_error, solve_dense


@dataclass(frozen=True)
class ManufacturedCase:
    """A mapped domain plus an exact solution u* with gradient and Laplacian.

    ``f`` and ``g`` are derived: f = -Lap u* + gamma u* (gamma dropped in
    Poisson mode) and g = grad u* . n.
    """

    name: str
    mapping: DomainMapping
    exact: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    laplacian: Callable[[np.ndarray], np.ndarray]
    gamma: Union[Callable[[np.ndarray], np.ndarray], float]
    quad_offset: int = 4

    def problem(self, n, mode="helmholtz", q=None):
        q = n + self.quad_offset if q is None else q
        if mode == "poisson":

            def f(s):
                return -self.laplacian(s)

            gamma = None
        else:
            gamma = self.gamma

            def f(s):
                gam = gamma(s) if callable(gamma) else gamma
                return -self.laplacian(s) + gam * self.exact(s)

        def g(s, normal):
            return np.einsum("pi,pi->p", self.gradient(s), normal)

        return ProblemSpec(self.mapping, n, f, g, gamma=gamma, mode=mode, quad_order=q)


def _planar_exact(s):
    return np.exp(-s[:, 0] ** 2) * np.cos(np.pi * s[:, 1])


def _planar_gradient(s):
    e = np.exp(-s[:, 0] ** 2)
    return np.stack(
        [-2.0 * s[:, 0] * e * np.cos(np.pi * s[:, 1]), -np.pi * e * np.sin(np.pi * s[:, 1])], axis=1
    )


def _planar_laplacian(s):
    e = np.exp(-s[:, 0] ** 2) * np.cos(np.pi * s[:, 1])
    return (4.0 * s[:, 0] ** 2 - 2.0 - np.pi**2) * e


def _planar_gamma(s):
    return np.exp(s[:, 0] - s[:, 1])


def _harmonic3_exact(s):
    return s[:, 0] * np.exp(s[:, 1]) * np.sin(s[:, 2])


def _harmonic3_gradient(s):
    e = np.exp(s[:, 1])
    return np.stack(
        [e * np.sin(s[:, 2]), s[:, 0] * e * np.sin(s[:, 2]), s[:, 0] * e * np.cos(s[:, 2])], axis=1
    )


def _harmonic3_laplacian(s):
    # s1 e^{s2} sin(s3) is harmonic
    return np.zeros(s.shape[0])


def planar_case(a=0.5):
    return ManufacturedCase(
        "planar-quadratic",
        planar_quadratic_map(a),
        _planar_exact,
        _planar_gradient,
        _planar_laplacian,
        _planar_gamma,
    )


def ellipsoid_case(M=ELLIPSOID_MATRIX, gamma=1.0):
    return ManufacturedCase(
        "ellipsoid", linear_map_3d(M), _harmonic3_exact, _harmonic3_gradient, _harmonic3_laplacian, gamma
    )


def star_case(e_s=5, gamma=1.0, surface=TEST_SURFACE, quad_offset=4):
    return ManufacturedCase(
        "star",
        star_shaped_map(surface, e_s),
        _harmonic3_exact,
        _harmonic3_gradient,
        _harmonic3_laplacian,
        gamma,
        quad_offset,
    )


BUILTIN_CASES = {
    "planar-quadratic": planar_case,
    "ellipsoid": ellipsoid_case,
    "star": star_case,
}


def run_degree(case, n, mode="helmholtz", q=None, exact=None):
    """Assemble, solve and measure one degree; returns a RunReport."""
    start = time.perf_counter()
    spec = case.problem(n, mode=mode, q=q) if isinstance(case, ManufacturedCase) else case
    system = assemble(spec)
    solution = solve_dense(system)
    u_exact = exact if exact is not None else getattr(case, "exact", None)
    err = max_grid_error(solution, u_exact) if u_exact is not None else float("nan")
    cond = condition_number(system)
    seconds = time.perf_counter() - start
    return RunReport(n, dim_pi(spec.dimension, n), err, cond, spec.q, seconds)
