from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from fickjacobs.apps.diffusion.types import DeffMethod
from fickjacobs.core.exceptions import InvalidParameter

MIN_CELLS = 4


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on ``[u_min, u_max]``."""

    u_min: float
    u_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < MIN_CELLS:
            raise InvalidParameter(f"A grid needs at least {MIN_CELLS} cells.", details=self.n_cells)
        if not self.u_min < self.u_max:
            raise InvalidParameter("Grid needs u_min < u_max.", details=(self.u_min, self.u_max))

    @property
    def length(self) -> float:
        return self.u_max - self.u_min

    @property
    def du(self) -> float:
        return self.length / self.n_cells

    @property
    def faces(self) -> np.ndarray:
        return np.linspace(self.u_min, self.u_max, self.n_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.u_min + (np.arange(self.n_cells) + 0.5) * self.du


@dataclass(frozen=True)
class NoFlux:
    pass


@dataclass(frozen=True)
class FixedDensity:
    value: float


Boundary = Union[NoFlux, FixedDensity]


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    theta: float = 1.0
    bc_left: Boundary = field(default_factory=NoFlux)
    bc_right: Boundary = field(default_factory=NoFlux)

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameter("Time step must be positive.", details=self.dt)
        if not 0.0 <= self.theta <= 1.0:
            raise InvalidParameter("theta must lie in [0, 1].", details=self.theta)


@dataclass(frozen=True, eq=False)
class Operator:
    """
    Finite-volume discretization of ``d/du (𝒟 omega d/du (p / omega))``.

    ``face_K`` holds ``𝒟 omega`` at the ``n + 1`` faces (boundary faces included) and
    ``omega_cells`` the volume density at cell centers.
    """

    grid: Grid1D
    omega_cells: np.ndarray
    omega_faces: np.ndarray
    deff_faces: np.ndarray
    method: DeffMethod

    @cached_property
    def face_K(self) -> np.ndarray:
        return self.deff_faces * self.omega_faces


@dataclass(frozen=True, eq=False)
class BandedSystem:
    """``dp/dt = L p + source`` with ``L`` stored in ``scipy.linalg.solve_banded`` layout."""

    bands: np.ndarray
    source: np.ndarray

    def apply(self, p: np.ndarray) -> np.ndarray:
        upper, diag, lower = self.bands
        result = diag * p + self.source
        result[:-1] += upper[1:] * p[1:]
        result[1:] += lower[:-1] * p[:-1]
        return result


@dataclass(frozen=True, eq=False)
class SolverState:
    t: float
    p: np.ndarray
    face_K: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.p)):
            raise InvalidParameter("Density must be finite.")
