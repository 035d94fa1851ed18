"""
Adaptive tensor-product Gauss-Legendre quadrature on rectangles.

A panel is accepted when its n-point estimate and the sum of its four children's estimates
agree within the panel's share of the global tolerance. Integrands are vectorized: they
receive two arrays ``V, W`` of equal shape and return either an array of that shape or a
stack of components with a leading axis.
"""
import logging
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from fickjacobs.core.exceptions import InvalidParameter, QuadratureFailure

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 16
DEFAULT_MAX_PANELS = 4096
ROUNDOFF_FLOOR = 64 * np.finfo(float).eps

Integrand2D = Callable[[np.ndarray, np.ndarray], np.ndarray]
Panel = tuple[float, float, float, float]

# Process-wide rule; management commands set it from settings.
_rule = {"order": DEFAULT_ORDER, "max_panels": DEFAULT_MAX_PANELS}


def configure(order: int | None = None, max_panels: int | None = None) -> None:
    """Change the default points per panel and refinement budget of ``integrate_2d``."""
    if order is not None:
        if order < 1:
            raise InvalidParameter("Quadrature order must be at least 1.", details=order)
        _rule["order"] = int(order)
    if max_panels is not None:
        if max_panels < 1:
            raise InvalidParameter("Panel budget must be at least 1.", details=max_panels)
        _rule["max_panels"] = int(max_panels)


@lru_cache(maxsize=32)
def gauss_legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    return nodes, weights


def tensor_nodes(panel: Panel, order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return node grids ``V, W`` and the tensor weights scaled to ``panel``."""
    v1, v2, w1, w2 = panel
    nodes, weights = gauss_legendre_rule(order)
    half_v, half_w = 0.5 * (v2 - v1), 0.5 * (w2 - w1)
    v = 0.5 * (v1 + v2) + half_v * nodes
    w = 0.5 * (w1 + w2) + half_w * nodes
    V, W = np.meshgrid(v, w, indexing="ij")
    return V, W, np.outer(weights, weights) * (half_v * half_w)


def _estimate(integrand: Integrand2D, panel: Panel, order: int) -> tuple[np.ndarray, np.ndarray]:
    V, W, weights = tensor_nodes(panel, order)
    values = np.asarray(integrand(V, W), dtype=float)
    if not np.all(np.isfinite(values)):
        raise QuadratureFailure("Integrand is not finite inside the integration domain.", details=panel)
    integral = np.tensordot(values, weights, axes=([-2, -1], [0, 1]))
    magnitude = np.tensordot(np.abs(values), weights, axes=([-2, -1], [0, 1]))
    return np.atleast_1d(integral), np.atleast_1d(magnitude)


def _split(panel: Panel) -> list[Panel]:
    v1, v2, w1, w2 = panel
    vm, wm = 0.5 * (v1 + v2), 0.5 * (w1 + w2)
    return [(v1, vm, w1, wm), (v1, vm, wm, w2), (vm, v2, w1, wm), (vm, v2, wm, w2)]


def integrate_2d(
    integrand: Integrand2D,
    v_range: tuple[float, float],
    w_range: tuple[float, float],
    tol: float = 1e-10,
    order: int | None = None,
    max_panels: int | None = None,
) -> np.ndarray | float:
    """
    Integrate ``integrand`` over ``v_range x w_range`` to relative accuracy ``tol``.

    Args:
        integrand: vectorized function of ``(V, W)``; may return several stacked components.
        v_range: integration limits in v.
        w_range: integration limits in w.
        tol: relative tolerance, measured against the integral of the absolute integrand.
        order: Gauss-Legendre points per direction and panel; the configured rule when omitted.
        max_panels: refinement budget before ``QuadratureFailure`` is raised.

    Returns:
        The integral, a float for scalar integrands and an array otherwise.
    """
    if tol <= 0:
        raise QuadratureFailure("Quadrature tolerance must be positive.", details=tol)
    order = _rule["order"] if order is None else order
    max_panels = _rule["max_panels"] if max_panels is None else max_panels

    root: Panel = (float(v_range[0]), float(v_range[1]), float(w_range[0]), float(w_range[1]))
    total_area = abs((root[1] - root[0]) * (root[3] - root[2]))
    if total_area == 0.0:
        probe, _ = _estimate(integrand, root, 1)
        result = np.zeros_like(probe)
        return float(result[0]) if result.size == 1 else result

    coarse, magnitude = _estimate(integrand, root, order)
    scale = np.maximum(magnitude, np.finfo(float).tiny)
    total = np.zeros_like(coarse)
    stack = [(root, coarse)]
    panels = 1

    while stack:
        panel, estimate = stack.pop()
        children = _split(panel)
        child_estimates = [_estimate(integrand, child, order) for child in children]
        fine = sum(value for value, _ in child_estimates)
        fine_magnitude = sum(mag for _, mag in child_estimates)
        share = abs((panel[1] - panel[0]) * (panel[3] - panel[2])) / total_area
        error = np.abs(fine - estimate)
        allowed = np.maximum(tol * scale * share, ROUNDOFF_FLOOR * fine_magnitude)

        if np.all(error <= allowed):
            total += fine
            continue

        panels += 4
        if panels > max_panels:
            logger.warning("Quadrature exhausted %d panels; worst error %.3e", max_panels, float(np.max(error)))
            raise QuadratureFailure(details={"panels": panels, "error": float(np.max(error))})
        stack.extend((child, value) for child, (value, _) in zip(children, child_estimates))

    logger.debug("Quadrature converged with %d panels", panels)
    return float(total[0]) if total.size == 1 else total
