# contains the parameter sets behind the reference 𝒟(u) profiles
import math
from dataclasses import dataclass
from typing import Any

from fickjacobs.apps.sections.services import matched_parameters

FIGURE_POINTS = 512
HELIX = {"kind": "helix", "a": 1 / 4, "b": 1 / 6}
CIRCLE = {"kind": "circle", "radius": 1 / 4}
QUARTER = {"u_min": 0.0, "u_max": math.pi / 2, "n": FIGURE_POINTS}


@dataclass(frozen=True)
class FigureSeries:
    """One CSV file of a figure: a channel document and the methods evaluated on its grid."""

    name: str
    document: dict[str, Any]
    methods: tuple[str, ...]


def _document(curve: dict, section: dict, omega: float = 4.0) -> dict[str, Any]:
    return {
        "curve": dict(curve),
        "section": dict(section),
        "twist": {"omega": omega, "p": 0.0, "q": 0.0},
        "bulk_D": 1.0,
        "grid": dict(QUARTER),
    }


def _matched(r: float, suffix: str) -> tuple[FigureSeries, ...]:
    sizes = matched_parameters(r)
    return (
        FigureSeries(
            f"{suffix}_ellipse",
            _document(CIRCLE, {"kind": "ellipse", "r1": sizes.r1, "r2": sizes.r2}),
            ("ellipse", "quadrature"),
        ),
        FigureSeries(
            f"{suffix}_rectangle",
            _document(CIRCLE, {"kind": "rectangle", "d1": sizes.d1, "d2": sizes.d2}),
            ("rectangle", "quadrature"),
        ),
        FigureSeries(f"{suffix}_cardioid", _document(CIRCLE, {"kind": "cardioid", "r": r}), ("quadrature",)),
    )


FIGURES: dict[int, tuple[FigureSeries, ...]] = {
    3: (
        FigureSeries(
            "fig3_ellipse",
            _document(HELIX, {"kind": "ellipse", "r1": 1 / 6, "r2": 1 / 10}),
            ("ellipse", "quadrature"),
        ),
    ),
    4: (
        FigureSeries(
            "fig4_series",
            _document(HELIX, {"kind": "ellipse", "r1": 1 / 6, "r2": 1 / 10}),
            ("series:2", "series:4", "ellipse"),
        ),
    ),
    5: (
        FigureSeries(
            "fig5_rectangle",
            _document(HELIX, {"kind": "rectangle", "d1": 1 / 6, "d2": 1 / 10}),
            ("rectangle", "quadrature"),
        ),
        FigureSeries("fig5_cardioid", _document(HELIX, {"kind": "cardioid", "r": 1 / 25}), ("quadrature",)),
    ),
    6: _matched(1 / 20, "fig6"),
    7: _matched(1 / 15, "fig7"),
}
