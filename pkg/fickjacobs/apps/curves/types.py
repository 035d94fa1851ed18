from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from fickjacobs.core.exceptions import InvalidParameter

# A curve map is vectorized: an array of parameters of shape S gives points of shape S + (3,).
CurveMap = Callable[[np.ndarray], np.ndarray]

# Declared arc-length curves are sampled at this many Gauss-Legendre nodes.
ARCLENGTH_CHECK_NODES = 5
ARCLENGTH_SPEED_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CurveSpec:
    """
    A regular space curve ``alpha: [s1, s2] -> R^3``.

    ``derivatives`` optionally supplies the first three derivatives of ``map`` with respect to
    its own parameter; without them frames use central differences. A curve produced by
    ``reparametrize_arclength`` keeps a reference to the curve it came from in ``base`` and maps
    arc length back to the base parameter through ``parameter_of``.
    """

    map: CurveMap
    domain: tuple[float, float]
    is_arclength: bool = False
    fallback_normal: Optional[np.ndarray] = None
    derivatives: Optional[tuple[CurveMap, CurveMap, CurveMap]] = None
    periodic: bool = False
    name: str = "custom"
    base: Optional["CurveSpec"] = field(default=None, repr=False)
    parameter_of: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        s1, s2 = (float(value) for value in self.domain)
        if not s1 < s2:
            raise InvalidParameter("Curve domain must satisfy s1 < s2.", details=self.domain)
        object.__setattr__(self, "domain", (s1, s2))
        if self.fallback_normal is not None:
            normal = np.asarray(self.fallback_normal, dtype=float).reshape(3)
            norm = np.linalg.norm(normal)
            if norm == 0.0:
                raise InvalidParameter("fallback_normal must be a nonzero 3-vector.")
            object.__setattr__(self, "fallback_normal", normal / norm)
        if self.is_arclength and self.base is None:
            self._check_unit_speed()

    def _check_unit_speed(self):
        s1, s2 = self.domain
        nodes, _ = np.polynomial.legendre.leggauss(ARCLENGTH_CHECK_NODES)
        s = 0.5 * (s1 + s2) + 0.5 * (s2 - s1) * nodes
        if self.derivatives is not None:
            tangent = np.asarray(self.derivatives[0](s), dtype=float)
        else:
            h = 1e-3 * (s2 - s1)
            f = self.map
            tangent = (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h)
        speeds = np.linalg.norm(tangent, axis=-1)
        worst = float(np.max(np.abs(speeds - 1.0)))
        if not worst <= ARCLENGTH_SPEED_TOL:
            raise InvalidParameter(
                "Curve is declared arc-length but its speed is not 1.",
                details={"max_speed_error": worst, "speeds": speeds.tolist()},
            )

    @property
    def length(self) -> float:
        """Length of the parameter domain; the curve length when ``is_arclength``."""
        return self.domain[1] - self.domain[0]

    def contains(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return (u >= self.domain[0]) & (u <= self.domain[1])

    def position(self, u) -> np.ndarray:
        return np.asarray(self.map(np.asarray(u, dtype=float)), dtype=float)


@dataclass(frozen=True, eq=False)
class FrameSample:
    u: float
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float


class FrameBundle(NamedTuple):
    """Frames at many arc lengths at once; vectors carry a trailing axis of length 3."""

    u: np.ndarray
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray

    def sample(self, index=()) -> FrameSample:
        return FrameSample(
            u=float(self.u[index]),
            position=self.position[index],
            T=self.T[index],
            N=self.N[index],
            B=self.B[index],
            kappa=float(self.kappa[index]),
            tau=float(self.tau[index]),
        )
