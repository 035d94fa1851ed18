# contains the differential geometry of the base curve
import logging

import numpy as np
from scipy.interpolate import PchipInterpolator

from fickjacobs.apps.curves.types import CurveSpec, FrameBundle, FrameSample
from fickjacobs.core.exceptions import DegenerateCurve, InfiniteFocalDistance, UndefinedNormal
from fickjacobs.core.quadrature import gauss_legendre_rule

logger = logging.getLogger(__name__)

STRAIGHT_KAPPA = 1e-10
MIN_SPEED = 1e-12
LENGTH_RULE_ORDER = 16
INITIAL_LENGTH_PANELS = 64
MAX_LENGTH_PANELS = 2**16
INVERSE_NEWTON_STEPS = 3

# Central-difference steps as fractions of the domain length, one per derivative order.
DIFFERENCE_STEPS = (1e-3, 2e-3, 5e-3)


def curve_derivatives(curve: CurveSpec, s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First three derivatives of ``curve.map`` at parameters ``s``."""
    s = np.asarray(s, dtype=float)
    if curve.derivatives is not None:
        return tuple(np.asarray(derivative(s), dtype=float) for derivative in curve.derivatives)  # type: ignore

    # fourth-order central stencils
    f = curve.map
    h1, h2, h3 = (fraction * curve.length for fraction in DIFFERENCE_STEPS)
    first = (f(s - 2 * h1) - 8 * f(s - h1) + 8 * f(s + h1) - f(s + 2 * h1)) / (12 * h1)
    second = (-f(s - 2 * h2) + 16 * f(s - h2) - 30 * f(s) + 16 * f(s + h2) - f(s + 2 * h2)) / (12 * h2**2)
    third = (
        f(s - 3 * h3) - 8 * f(s - 2 * h3) + 13 * f(s - h3) - 13 * f(s + h3) + 8 * f(s + 2 * h3) - f(s + 3 * h3)
    ) / (8 * h3**3)
    return first, second, third


def speed(curve: CurveSpec, s) -> np.ndarray:
    first, _, _ = curve_derivatives(curve, s)
    return np.linalg.norm(first, axis=-1)


def _length_table(curve: CurveSpec, panels: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = gauss_legendre_rule(LENGTH_RULE_ORDER)
    knots = np.linspace(curve.domain[0], curve.domain[1], panels + 1)
    half = 0.5 * np.diff(knots)
    points = 0.5 * (knots[:-1] + knots[1:])[:, None] + half[:, None] * nodes[None, :]
    speeds = speed(curve, points)
    if np.min(speeds) < MIN_SPEED:
        raise DegenerateCurve(details={"min_speed": float(np.min(speeds))})
    increments = half * (speeds @ weights)
    return knots, np.concatenate([[0.0], np.cumsum(increments)])


def _partial_length(curve: CurveSpec, start: np.ndarray, stop: np.ndarray) -> np.ndarray:
    nodes, weights = gauss_legendre_rule(LENGTH_RULE_ORDER)
    half = 0.5 * (stop - start)
    points = 0.5 * (start + stop)[..., None] + half[..., None] * nodes
    return half * (speed(curve, points) @ weights)


def reparametrize_arclength(curve: CurveSpec, tol: float = 1e-10) -> CurveSpec:
    """
    Return an arc-length parametrized copy of ``curve``.

    A cumulative Gauss-Legendre length table is refined until the total length is stable to
    ``tol``; the inverse ``u -> s`` starts from a monotone cubic interpolant of the table and is
    polished by Newton steps on the exact partial lengths.
    """
    if curve.is_arclength:
        return curve

    panels = INITIAL_LENGTH_PANELS
    knots, lengths = _length_table(curve, panels)
    while True:
        finer_knots, finer_lengths = _length_table(curve, 2 * panels)
        if abs(finer_lengths[-1] - lengths[-1]) <= tol * finer_lengths[-1]:
            knots, lengths = finer_knots, finer_lengths
            break
        panels *= 2
        knots, lengths = finer_knots, finer_lengths
        if panels > MAX_LENGTH_PANELS:
            raise DegenerateCurve("Arc-length table did not converge.", details={"panels": panels})

    total = float(lengths[-1])
    guess = PchipInterpolator(lengths, knots)
    logger.debug("Reparametrized %s curve: length %.12g with %d panels", curve.name, total, len(knots) - 1)

    def parameter_of(u):
        u = np.clip(np.asarray(u, dtype=float), 0.0, total)
        s = np.asarray(guess(u), dtype=float)
        index = np.clip(np.searchsorted(lengths, u, side="right") - 1, 0, len(knots) - 2)
        for _ in range(INVERSE_NEWTON_STEPS):
            residual = lengths[index] + _partial_length(curve, knots[index], s) - u
            s = np.clip(s - residual / speed(curve, s), curve.domain[0], curve.domain[1])
        return s

    return CurveSpec(
        map=lambda u: curve.map(parameter_of(u)),
        domain=(0.0, total),
        is_arclength=True,
        fallback_normal=curve.fallback_normal,
        periodic=curve.periodic,
        name=curve.name,
        base=curve,
        parameter_of=parameter_of,
    )


def frames(curve: CurveSpec, u) -> FrameBundle:
    """
    Frenet-Serret frames at arc lengths ``u`` (any shape).

    The frame is computed with parametrization invariant formulas, so a reparametrized curve
    delegates to the derivatives of its base curve.
    """
    u = np.asarray(u, dtype=float)
    source, s = curve, u
    if curve.base is not None and curve.parameter_of is not None:
        source, s = curve.base, curve.parameter_of(u)

    position = source.position(s)
    first, second, third = curve_derivatives(source, s)
    speed_ = np.linalg.norm(first, axis=-1)
    if np.any(speed_ < MIN_SPEED):
        raise DegenerateCurve(details={"min_speed": float(np.min(speed_))})

    T = first / speed_[..., None]
    binormal = np.cross(first, second)
    binormal_norm = np.linalg.norm(binormal, axis=-1)
    kappa = binormal_norm / speed_**3
    straight = kappa < STRAIGHT_KAPPA

    safe_norm = np.where(straight, 1.0, binormal_norm)
    B = binormal / safe_norm[..., None]
    N = np.cross(B, T)
    tau = np.einsum("...i,...i->...", binormal, third) / safe_norm**2

    if np.any(straight):
        if curve.fallback_normal is None:
            raise UndefinedNormal(u=float(np.ravel(u)[np.argmax(np.ravel(straight))]))
        fallback = curve.fallback_normal - np.einsum("...i,i->...", T, curve.fallback_normal)[..., None] * T
        fallback_norm = np.linalg.norm(fallback, axis=-1)
        if np.any(fallback_norm[straight] < MIN_SPEED):
            raise UndefinedNormal("fallback_normal is parallel to the tangent.")
        fallback = fallback / np.where(fallback_norm > 0, fallback_norm, 1.0)[..., None]
        N = np.where(straight[..., None], fallback, N)
        B = np.where(straight[..., None], np.cross(T, N), B)
        kappa = np.where(straight, 0.0, kappa)
        tau = np.where(straight, 0.0, tau)

    return FrameBundle(u=u, position=position, T=T, N=N, B=B, kappa=kappa, tau=tau)


def frame_at(curve: CurveSpec, u: float) -> FrameSample:
    return frames(curve, np.asarray(float(u))).sample()


def focal_distance(frame: FrameSample, eta: float) -> float:
    """Signed distance ``(1 - kappa*eta)/kappa`` from a normal-plane point to the focal line."""
    if frame.kappa < STRAIGHT_KAPPA:
        raise InfiniteFocalDistance(u=frame.u)
    return (1.0 - frame.kappa * eta) / frame.kappa
