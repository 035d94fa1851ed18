import numpy as np

from fickjacobs.apps.sections.types import SectionMap
from fickjacobs.core.exceptions import InvalidParameter

# Relative slack for boundary points in membership predicates.
MEMBERSHIP_SLACK = 1e-12


def _require_positive(**params: float) -> None:
    for name, value in params.items():
        if not value > 0:
            raise InvalidParameter(f"Section parameter {name} must be positive.", details=value)


def ellipse(r1: float, r2: float) -> SectionMap:
    """
    Ellipse with semi-axis ``r1`` along N and ``r2`` along B at zero twist.

    ``r1 >= r2`` is the convention; a section with ``r1 < r2`` is accepted as given and its
    moment orientation angle comes out shifted by pi/2.
    """
    _require_positive(r1=r1, r2=r2)

    def section_map(V, W):
        return V * r1 * np.cos(W), V * r2 * np.sin(W)

    return SectionMap(
        map=section_map,
        domain=((0.0, 1.0), (-np.pi, np.pi)),
        membership=lambda eta0, beta0: (eta0 / r1) ** 2 + (beta0 / r2) ** 2 <= 1.0 + MEMBERSHIP_SLACK,
        jacobian=lambda V, W: r1 * r2 * V,
        support_function=lambda d: float(np.hypot(r1 * d[0], r2 * d[1])),
        kind="ellipse",
        params={"r1": float(r1), "r2": float(r2)},
    )


def rectangle(d1: float, d2: float) -> SectionMap:
    """Rectangle of side ``d1`` along N and ``d2`` along B, centered at the base curve."""
    _require_positive(d1=d1, d2=d2)
    half1, half2 = 0.5 * d1, 0.5 * d2

    return SectionMap(
        map=lambda V, W: (np.asarray(V, dtype=float), np.asarray(W, dtype=float)),
        domain=((-half1, half1), (-half2, half2)),
        membership=lambda eta0, beta0: (np.abs(eta0) <= half1 * (1 + MEMBERSHIP_SLACK))
        & (np.abs(beta0) <= half2 * (1 + MEMBERSHIP_SLACK)),
        jacobian=lambda V, W: np.ones_like(V),
        support_function=lambda d: float(abs(d[0]) * half1 + abs(d[1]) * half2),
        kind="rectangle",
        params={"d1": float(d1), "d2": float(d2)},
    )


def cardioid(r: float) -> SectionMap:
    """
    Cardioid of area ``6 pi r^2`` with its cusp on the +B side.

    The ``+2r/3`` shift in ``beta0`` moves the centroid to the origin. The parametrization is
    negatively oriented, its Jacobian being ``-6 r^2 v (1 - cos w)``.
    """
    _require_positive(r=r)
    shift = 2.0 * r / 3.0
    cusp = r + shift

    def section_map(V, W):
        return V * r * (2 * np.sin(W) - np.sin(2 * W)), V * r * (2 * np.cos(W) - np.cos(2 * W)) + shift

    def membership(eta0, beta0):
        # polar form about the cusp: rho = 2r(1 - cos(phi)), phi measured from +B
        dy = beta0 - cusp
        rho = np.hypot(eta0, dy)
        return rho**2 + 2 * r * dy <= 2 * r * rho + MEMBERSHIP_SLACK * r**2

    return SectionMap(
        map=section_map,
        domain=((0.0, 1.0), (-np.pi, np.pi)),
        membership=membership,
        jacobian=lambda V, W: -6.0 * r**2 * V * (1.0 - np.cos(W)),
        orientation=-1,
        kind="cardioid",
        params={"r": float(r)},
    )


BUILTIN_SECTIONS = {
    "ellipse": ellipse,
    "rectangle": rectangle,
    "cardioid": cardioid,
}
