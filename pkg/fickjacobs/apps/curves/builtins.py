import numpy as np

from fickjacobs.apps.curves.types import CurveSpec
from fickjacobs.core.exceptions import InvalidParameter


def _stack(x, y, z) -> np.ndarray:
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1).astype(float)


def line(
    length: float = 1.0,
    start: float = 0.0,
    direction=(1.0, 0.0, 0.0),
    fallback_normal=(0.0, 1.0, 0.0),
) -> CurveSpec:
    """Straight line ``s -> s * direction`` on ``[start, start + length]``."""
    if length <= 0:
        raise InvalidParameter("Line length must be positive.", details=length)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    zero = np.zeros(3)

    return CurveSpec(
        map=lambda s: np.asarray(s, dtype=float)[..., None] * direction,
        domain=(start, start + length),
        is_arclength=True,
        fallback_normal=None if fallback_normal is None else np.asarray(fallback_normal, dtype=float),
        derivatives=(
            lambda s: np.broadcast_to(direction, np.shape(s) + (3,)),
            lambda s: np.broadcast_to(zero, np.shape(s) + (3,)),
            lambda s: np.broadcast_to(zero, np.shape(s) + (3,)),
        ),
        name="line",
    )


def helix(a: float, b: float, length: float | None = None, start: float = 0.0, fallback_normal=None) -> CurveSpec:
    """
    Helix of radius ``a`` and pitch ``b`` in arc-length form.

    With ``c = sqrt(a^2 + b^2)`` the curve is ``(a cos(u/c), a sin(u/c), b u/c)``, so that
    ``kappa = a/c^2`` and ``tau = b/c^2``. The default length is one full turn.
    """
    if a <= 0:
        raise InvalidParameter("Helix radius a must be positive.", details=a)
    if b < 0:
        raise InvalidParameter("Helix pitch b must be non-negative.", details=b)
    c = float(np.hypot(a, b))
    turn = 2 * np.pi * c
    length = turn if length is None else float(length)
    if length <= 0:
        raise InvalidParameter("Helix length must be positive.", details=length)

    def position(u):
        t = np.asarray(u, dtype=float) / c
        return _stack(a * np.cos(t), a * np.sin(t), b * t)

    def first(u):
        t = np.asarray(u, dtype=float) / c
        return _stack(-a / c * np.sin(t), a / c * np.cos(t), np.full_like(t, b / c))

    def second(u):
        t = np.asarray(u, dtype=float) / c
        return _stack(-a / c**2 * np.cos(t), -a / c**2 * np.sin(t), np.zeros_like(t))

    def third(u):
        t = np.asarray(u, dtype=float) / c
        return _stack(a / c**3 * np.sin(t), -a / c**3 * np.cos(t), np.zeros_like(t))

    return CurveSpec(
        map=position,
        domain=(start, start + length),
        is_arclength=True,
        fallback_normal=fallback_normal,
        derivatives=(first, second, third),
        periodic=b == 0 and np.isclose(length, turn, rtol=1e-12),
        name="helix" if b > 0 else "circle",
    )


def circle(radius: float, length: float | None = None, start: float = 0.0) -> CurveSpec:
    """Circle of the given radius in the xy-plane; the ``b = 0`` helix."""
    if radius <= 0:
        raise InvalidParameter("Circle radius must be positive.", details=radius)
    return helix(radius, 0.0, length=length, start=start)


BUILTIN_CURVES = {
    "line": line,
    "circle": circle,
    "helix": helix,
}
