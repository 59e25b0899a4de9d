"""Spectral Galerkin solver for Neumann problems on domains mapped from the unit ball."""

from ._accel import backend
from .basis import BasisSet, dim_pi
from .galerkin import ProblemSpec, assemble, compatibility_check, constrained_basis, mean_zero_projection
from .mapping import (
    DomainMapping,
    SingularJacobianError,
    coefficient_matrix,
    identity_map,
    linear_map_3d,
    planar_quadratic_map,
    star_shaped_map,
)
from .problems import ellipsoid_case, planar_case, run_degree, star_case
from .solve import SpectralSolution, condition_number, max_grid_error, solve_dense

__all__ = [
    "BasisSet",
    "DomainMapping",
    "ProblemSpec",
    "SingularJacobianError",
    "SpectralSolution",
    "assemble",
    "backend",
    "coefficient_matrix",
    "compatibility_check",
    "condition_number",
    "constrained_basis",
    "dim_pi",
    "ellipsoid_case",
    "identity_map",
    "linear_map_3d",
    "max_grid_error",
    "mean_zero_projection",
    "planar_case",
    "planar_quadratic_map",
    "run_degree",
    "solve_dense",
    "star_case",
    "star_shaped_map",
]

__version__ = "0.1.0"
