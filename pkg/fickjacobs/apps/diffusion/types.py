from collections.abc import Callable
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np

from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.core.exceptions import InvalidParameter

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class DeffMethod:
    """Base of the ways 𝒟(u) can be evaluated; ``label`` names the method in CSV output."""

    kind: ClassVar[str] = "method"

    @property
    def label(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Quadrature(DeffMethod):
    kind: ClassVar[str] = "quadrature"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidParameter("Quadrature tolerance must be positive.", details=self.tol)


@dataclass(frozen=True)
class Series(DeffMethod):
    kind: ClassVar[str] = "series"
    order: int = 2
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.order < 0:
            raise InvalidParameter("Series order must be non-negative.", details=self.order)
        if not self.tol > 0:
            raise InvalidParameter("Quadrature tolerance must be positive.", details=self.tol)

    @property
    def label(self) -> str:
        return f"series{self.order}"


@dataclass(frozen=True)
class SecondOrder(DeffMethod):
    kind: ClassVar[str] = "second_order"
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class ClosedFormEllipse(DeffMethod):
    kind: ClassVar[str] = "ellipse"


@dataclass(frozen=True)
class ClosedFormRectangle(DeffMethod):
    kind: ClassVar[str] = "rectangle"


@dataclass(frozen=True)
class Focal(DeffMethod):
    kind: ClassVar[str] = "focal"
    tol: float = DEFAULT_TOL


def parse_method(text: str, tol: float = DEFAULT_TOL) -> DeffMethod:
    """
    Build a method from its command-line spelling.

    Accepted: ``quadrature``, ``series:N``, ``second_order``, ``ellipse``, ``rectangle``, ``focal``.
    """
    name, _, argument = text.strip().lower().partition(":")
    if name == "quadrature":
        return Quadrature(tol=tol)
    if name == "series":
        try:
            order = int(argument) if argument else 2
        except ValueError:
            raise InvalidParameter(f"Series order must be an integer: {text!r}")
        return Series(order=order, tol=tol)
    if name in ("second_order", "second-order"):
        return SecondOrder(tol=tol)
    if name == "ellipse":
        return ClosedFormEllipse()
    if name == "rectangle":
        return ClosedFormRectangle()
    if name == "focal":
        return Focal(tol=tol)
    raise InvalidParameter(f"Unknown method {text!r}")


@dataclass(frozen=True, eq=False)
class DeffProfile:
    u_grid: np.ndarray
    deff: np.ndarray
    omega_vol: np.ndarray
    area: np.ndarray
    method: DeffMethod
    channel: ChannelSpec = field(repr=False)

    @property
    def deff_over_D(self) -> np.ndarray:
        return self.deff / self.channel.bulk_D

    def rows(self):
        for u, deff, ratio, omega, area in zip(self.u_grid, self.deff, self.deff_over_D, self.omega_vol, self.area):
            yield {
                "u": u,
                "deff": deff,
                "deff_over_D": ratio,
                "omega_vol": omega,
                "area": area,
                "method": self.method.label,
            }


@dataclass(frozen=True, eq=False)
class ClosedFormTerms:
    """
    Antiderivative data of a closed-form section at one arc length.

    ``H`` satisfies ``d2H/dv dw = omega`` on the section domain, so the four-corner sum of
    ``H`` is the integral of ``omega``. Ellipse entries: ``R``, ``Q(v)``, ``T(v, w)``,
    ``S(w)``. Rectangle entries: ``gamma`` and ``corners``.
    """

    kind: str
    u: float
    kappa: float
    offset: float
    H: Callable[[np.ndarray, np.ndarray], np.ndarray]
    omega: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: tuple[tuple[float, float], tuple[float, float]]
    area: float
    R: Optional[float] = None
    Q: Optional[Callable[[np.ndarray], np.ndarray]] = None
    T: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    S: Optional[Callable[[np.ndarray], np.ndarray]] = None
    gamma: Optional[np.ndarray] = None
    corners: Optional[np.ndarray] = None
