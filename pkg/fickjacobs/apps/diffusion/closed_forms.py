# contains the exact 𝒟(u) of the twisted ellipse and rectangle channels and their antiderivatives
import logging

import numpy as np

from fickjacobs.apps.curves.services import frame_at
from fickjacobs.apps.diffusion.types import ClosedFormTerms
from fickjacobs.apps.sections.services import FOCAL_MARGIN
from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.core.exceptions import FocalContact, InvalidParameter

logger = logging.getLogger(__name__)

# Below this curvature-to-size ratio the closed forms lose digits to cancellation.
SMALL_KAPPA = 1e-6
# |cos * sin| thresholds between the corner sum, the paired-difference form and the exact limit.
CORNER_SUM_MIN = 1e-3
NO_GYRATION_MAX = 1e-8
RATIO_SERIES_MAX = 1e-8


def log1p_ratio(y) -> np.ndarray:
    """``log1p(y) / y`` with its limit 1 at ``y = 0``."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < RATIO_SERIES_MAX
    safe = np.where(small, 1.0, y)
    return np.where(small, 1.0 - 0.5 * y + y * y / 3.0, np.log1p(safe) / safe)


def x_log_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def corner_sum(H, v_range, w_range):
    """``H(v2, w2) - H(v1, w2) - H(v2, w1) + H(v1, w1)``: the integral of ``d2H/dv dw`` over the box."""
    (v1, v2), (w1, w2) = v_range, w_range
    return H(v2, w2) - H(v1, w2) - H(v2, w1) + H(v1, w1)


def _section_params(channel: ChannelSpec, kind: str) -> dict:
    section = channel.section
    if section.kind != kind:
        raise InvalidParameter(f"Closed form needs a builtin {kind} section, got {section.kind!r}.")
    return section.params


def _local_geometry(channel: ChannelSpec, u: float) -> tuple[float, float, float, float]:
    """``(kappa, cos, sin, p)`` at ``u``."""
    kappa = frame_at(channel.curve, u).kappa
    angle = float(channel.transport.angle(u))
    return kappa, float(np.cos(angle)), float(np.sin(angle)), float(channel.transport.p(u))


# Ellipse


def _ellipse_amplitude(r1: float, r2: float, cos_: float, sin_: float) -> tuple[float, float]:
    """
    Signed amplitude and phase with ``eta - p = v * R * cos(w + phi)``.

    The phase is folded into ``[-pi/2, pi/2]`` by flipping the sign of ``R``, which keeps the
    arctangent branch in the antiderivative continuous on ``w`` in ``[-pi, pi]``.
    """
    R = float(np.hypot(r1 * cos_, r2 * sin_))
    phi = float(np.arctan2(r2 * sin_, r1 * cos_))
    if phi > 0.5 * np.pi:
        return -R, phi - np.pi
    if phi < -0.5 * np.pi:
        return -R, phi + np.pi
    return R, phi


def deff_ellipse_closed(channel: ChannelSpec, u: float) -> float:
    """
    Exact 𝒟(u) of a rigidly twisted elliptic section.

    With ``a = 1 - kappa p`` and ``x = kappa R / a``,
    ``𝒟 = 2 D / (a^2 (1 + sqrt(1 - x^2)))``; the rationalized form has no cancellation at
    small ``x`` and a short series takes over below ``SMALL_KAPPA``.
    """
    params = _section_params(channel, "ellipse")
    kappa, cos_, sin_, p = _local_geometry(channel, u)
    D = channel.bulk_D
    if kappa == 0.0:
        return D
    R = float(np.hypot(params["r1"] * cos_, params["r2"] * sin_))
    a = 1.0 - kappa * p
    if a <= 0.0 or kappa * (p + R) >= 1.0 - FOCAL_MARGIN:
        raise FocalContact(details={"max_kappa_eta": kappa * (p + R)}, u=u)
    x = kappa * R / a
    if x < SMALL_KAPPA:
        x2 = x * x
        return D / a**2 * (1.0 + x2 / 4.0 + x2 * x2 / 8.0 + 5.0 * x2**3 / 64.0)
    return 2.0 * D / (a**2 * (1.0 + np.sqrt(1.0 - x * x)))


def ellipse_terms(channel: ChannelSpec, u: float) -> ClosedFormTerms:
    params = _section_params(channel, "ellipse")
    r1, r2 = params["r1"], params["r2"]
    kappa, cos_, sin_, p = _local_geometry(channel, u)
    if kappa == 0.0:
        raise InvalidParameter("Antiderivative terms need a curved base line.", u=u)
    R, phi = _ellipse_amplitude(r1, r2, cos_, sin_)
    a = 1.0 - kappa * p
    if a <= 0.0 or kappa * (p + abs(R)) >= 1.0 - FOCAL_MARGIN:
        raise FocalContact(details={"max_kappa_eta": kappa * (p + abs(R))}, u=u)
    scale = -r1 * r2 * a / (kappa**2 * R**2)

    def Q(v):
        b = kappa * np.asarray(v, dtype=float) * R
        return np.sqrt(a * a - b * b)

    def T(v, w):
        b = kappa * np.asarray(v, dtype=float) * R
        theta = np.asarray(w, dtype=float) + phi
        return np.sqrt((a + b) / (a - b)) * np.tan(0.5 * theta)

    def S(w):
        return R * np.sin(np.asarray(w, dtype=float) + phi)

    def H(v, w):
        b = kappa * np.asarray(v, dtype=float) * R
        theta = np.asarray(w, dtype=float) + phi
        x = b / a
        # tan(theta) * log1p(-x cos(theta)), finite through cos(theta) = 0
        log_term = -x * np.sin(theta) * log1p_ratio(-x * np.cos(theta))
        gain = np.sqrt((a + b) / (a - b))
        half_angle = np.arctan2(gain * np.sin(0.5 * theta), np.cos(0.5 * theta))
        return scale * (log_term + 2.0 * Q(v) / a * half_angle - theta)

    def omega(v, w):
        v = np.asarray(v, dtype=float)
        return r1 * r2 * v / (a - kappa * v * R * np.cos(np.asarray(w, dtype=float) + phi))

    return ClosedFormTerms(
        kind="ellipse",
        u=float(u),
        kappa=kappa,
        offset=p,
        H=H,
        omega=omega,
        domain=channel.section.domain,
        area=np.pi * r1 * r2,
        R=abs(R),
        Q=Q,
        T=T,
        S=S,
    )


# Rectangle


def _rectangle_corners(d1: float, d2: float) -> np.ndarray:
    return 0.5 * np.array([[d1, d2], [d1, -d2], [-d1, -d2], [-d1, d2]])


def rectangle_gammas(kappa: float, cos_: float, sin_: float, p: float, d1: float, d2: float) -> np.ndarray:
    """``gamma_i = 1 - kappa (p - (cos, sin) . z_i)`` at the corners ``z_i`` in cyclic order."""
    return 1.0 - kappa * (p - _rectangle_corners(d1, d2) @ np.array([cos_, sin_]))


def _paired_difference(a: float, alpha_v: float, alpha_w: float, d1: float, d2: float) -> float:
    """
    ``int int dv dw / (a + alpha_v v + alpha_w w)`` over the centered ``d1 x d2`` box.

    Written as a difference of ``F(x, h) = log(x + h) + log1p(h / x) / (h / x)`` along the
    direction with the smaller coefficient, which stays accurate when that coefficient is tiny.
    """

    def F(x, h):
        return np.log(x + h) + log1p_ratio(h / x)

    if abs(alpha_w * d2) <= abs(alpha_v * d1):
        h = alpha_w * d2
        low = a - 0.5 * alpha_v * d1 - 0.5 * alpha_w * d2
        high = a + 0.5 * alpha_v * d1 - 0.5 * alpha_w * d2
        return float(d2 * (F(high, h) - F(low, h)) / alpha_v)
    h = alpha_v * d1
    low = a - 0.5 * alpha_v * d1 - 0.5 * alpha_w * d2
    high = a - 0.5 * alpha_v * d1 + 0.5 * alpha_w * d2
    return float(d1 * (F(high, h) - F(low, h)) / alpha_w)


def deff_rectangle_closed(channel: ChannelSpec, u: float) -> float:
    """
    Exact 𝒟(u) of a rigidly twisted rectangular section.

    ``𝒟 = D sum((-1)^(i+1) gamma_i log gamma_i) / (d1 d2 kappa^2 (1 - kappa p) cos sin)``
    away from the axis-aligned angles. Near them the same integral is taken in a
    paired-difference form, and within ``NO_GYRATION_MAX`` of them by its exact limit.
    """
    params = _section_params(channel, "rectangle")
    d1, d2 = params["d1"], params["d2"]
    kappa, cos_, sin_, p = _local_geometry(channel, u)
    D = channel.bulk_D
    if kappa == 0.0:
        return D
    a = 1.0 - kappa * p
    gamma = rectangle_gammas(kappa, cos_, sin_, p, d1, d2)
    if a <= 0.0 or gamma.min() <= FOCAL_MARGIN:
        raise FocalContact(details={"max_kappa_eta": 1.0 - float(gamma.min())}, u=u)

    if kappa * (abs(p) + 0.5 * (d1 + d2)) < SMALL_KAPPA:
        second = p * p + (d1**2 * cos_**2 + d2**2 * sin_**2) / 12.0
        return D * (1.0 + kappa * p + kappa**2 * second) / a

    gyration = abs(cos_ * sin_)
    if gyration < NO_GYRATION_MAX:
        # section edges aligned with N and B: eta varies along one side only
        logger.debug("Aligned rectangle at u=%g, using the no-gyration limit", u)
        half_width = 0.5 * kappa * (abs(cos_) * d1 if abs(sin_) <= abs(cos_) else abs(sin_) * d2) / a
        return D * float(np.arctanh(half_width) / half_width) / a**2

    if gyration < CORNER_SUM_MIN:
        integral = _paired_difference(a, -kappa * cos_, kappa * sin_, d1, d2)
        return D * integral / (d1 * d2 * a)

    signs = np.array([1.0, -1.0, 1.0, -1.0])
    return D * float(signs @ x_log_x(gamma)) / (d1 * d2 * kappa**2 * a * cos_ * sin_)


def deff_rectangle_as_printed(channel: ChannelSpec, u: float) -> float:
    """The corner-sum expression with ``(d1 d2 kappa)^2`` in the denominator, for comparison only."""
    params = _section_params(channel, "rectangle")
    d1, d2 = params["d1"], params["d2"]
    kappa, cos_, sin_, p = _local_geometry(channel, u)
    gamma = rectangle_gammas(kappa, cos_, sin_, p, d1, d2)
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    return channel.bulk_D * float(signs @ x_log_x(gamma)) / ((d1 * d2 * kappa) ** 2 * (1.0 - kappa * p) * cos_ * sin_)


def rectangle_terms(channel: ChannelSpec, u: float) -> ClosedFormTerms:
    params = _section_params(channel, "rectangle")
    d1, d2 = params["d1"], params["d2"]
    kappa, cos_, sin_, p = _local_geometry(channel, u)
    if kappa == 0.0 or abs(cos_ * sin_) < NO_GYRATION_MAX:
        raise InvalidParameter("Rectangle antiderivative needs kappa > 0 and a tilted section.", u=u)
    a = 1.0 - kappa * p

    def g(v, w):
        return a - kappa * cos_ * np.asarray(v, dtype=float) + kappa * sin_ * np.asarray(w, dtype=float)

    def H(v, w):
        return -x_log_x(g(v, w)) / (kappa**2 * cos_ * sin_)

    return ClosedFormTerms(
        kind="rectangle",
        u=float(u),
        kappa=kappa,
        offset=p,
        H=H,
        omega=lambda v, w: 1.0 / g(v, w),
        domain=channel.section.domain,
        area=d1 * d2,
        gamma=rectangle_gammas(kappa, cos_, sin_, p, d1, d2),
        corners=_rectangle_corners(d1, d2),
    )


def closed_form_terms(channel: ChannelSpec, u: float) -> ClosedFormTerms:
    builders = {"ellipse": ellipse_terms, "rectangle": rectangle_terms}
    try:
        builder = builders[channel.section.kind]
    except KeyError:
        raise InvalidParameter(f"No closed form for section kind {channel.section.kind!r}.")
    return builder(channel, u)


def deff_from_terms(terms: ClosedFormTerms, bulk_D: float) -> float:
    """𝒟 from the four-corner sum of the antiderivative."""
    integral = float(corner_sum(terms.H, *terms.domain))
    return bulk_D * integral / (terms.area * (1.0 - terms.kappa * terms.offset))
