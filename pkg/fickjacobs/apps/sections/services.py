# contains the cross-section geometry: transport, integrals over S_u and moments
import logging
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from fickjacobs.apps.curves.services import frames
from fickjacobs.apps.sections.types import ChannelSpec, MomentSummary, SectionMap
from fickjacobs.core.exceptions import ConfigError, FocalContact, InvalidParameter
from fickjacobs.core.quadrature import integrate_2d

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
CENTROID_TOL = 1e-8
EIGEN_TIE = 1e-12
FOCAL_MARGIN = 1e-9


def rotation(angle) -> tuple[np.ndarray, np.ndarray]:
    return np.cos(angle), np.sin(angle)


def transport(channel: ChannelSpec, u, eta0, beta0) -> tuple[np.ndarray, np.ndarray]:
    """Rotate R0 coordinates by ``omega * u`` and shift them by ``(p(u), q(u))``."""
    cos_, sin_ = rotation(channel.transport.angle(u))
    eta = cos_ * eta0 - sin_ * beta0 + channel.transport.p(u)
    beta = sin_ * eta0 + cos_ * beta0 + channel.transport.q(u)
    return eta, beta


def eta_beta(channel: ChannelSpec, u, v, w) -> tuple[np.ndarray, np.ndarray]:
    """Normal and binormal coordinates of the section point ``(v, w)`` at arc length ``u``."""
    eta0, beta0 = channel.section.map(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
    return transport(channel, u, eta0, beta0)


def untwist(channel: ChannelSpec, u, eta, beta) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of the transport: R0 coordinates of a normal-plane point at ``u``."""
    cos_, sin_ = rotation(channel.transport.angle(u))
    d_eta = np.asarray(eta, dtype=float) - channel.transport.p(u)
    d_beta = np.asarray(beta, dtype=float) - channel.transport.q(u)
    return cos_ * d_eta + sin_ * d_beta, -sin_ * d_eta + cos_ * d_beta


def area_density(channel: ChannelSpec, u, v, w) -> np.ndarray:
    """Signed area density ``omega_S``; rigid transport leaves it independent of ``u``."""
    return channel.section.signed_jacobian(v, w)


def integrate_over_section(
    channel: ChannelSpec,
    u: float,
    integrand: Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
):
    """
    Integrate ``integrand(eta, beta, density, V, W)`` over the section domain at ``u``.

    ``density`` is the nonnegative area density, so ``integrand`` returning ``density``
    integrates to the area.
    """
    section = channel.section

    def wrapped(V, W):
        eta, beta = eta_beta(channel, u, V, W)
        return integrand(eta, beta, section.area_density(V, W), V, W)

    return integrate_2d(wrapped, section.v_range, section.w_range, tol=tol)


def section_area(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    return float(integrate_over_section(channel, u, lambda eta, beta, density, V, W: density, tol))


def section_average(channel: ChannelSpec, u: float, f: Callable, tol: float = DEFAULT_TOL) -> float:
    """Area weighted mean of ``f(v, w)`` over the section at ``u``."""
    area, integral = integrate_over_section(
        channel, u, lambda eta, beta, density, V, W: np.stack([density, f(V, W) * density]), tol
    )
    return float(integral / area)


def section_centroid(section: SectionMap, tol: float = DEFAULT_TOL) -> tuple[float, float, float]:
    """``(eta0_mean, beta0_mean, area)`` of the untransported region R0."""

    def integrand(V, W):
        eta0, beta0 = section.map(V, W)
        density = section.area_density(V, W)
        return np.stack([density, eta0 * density, beta0 * density])

    area, eta_sum, beta_sum = integrate_2d(integrand, section.v_range, section.w_range, tol=tol)
    return eta_sum / area, beta_sum / area, area


def principal_axes(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Closed form eigenvalues ``lambda1 >= lambda2`` of ``[[a, c], [c, b]]`` and the angle of the first axis."""
    half_trace = 0.5 * (a + b)
    spread = float(np.hypot(0.5 * (a - b), c))
    lambda1, lambda2 = half_trace + spread, max(half_trace - spread, 0.0)
    if spread <= EIGEN_TIE * max(abs(half_trace), np.finfo(float).tiny):
        return lambda1, lambda2, 0.0
    theta = float(np.mod(0.5 * np.arctan2(2.0 * c, a - b), np.pi))
    return lambda1, lambda2, theta


def moments(channel: ChannelSpec, u: float, max_order: int = 4, tol: float = DEFAULT_TOL) -> MomentSummary:
    """
    Area, eta-moments and second central moments of the section at ``u``.

    Two passes: raw moments first, then central moments about the computed means, which
    keeps ``a``, ``b`` and ``c`` free of cancellation.
    """
    if max_order < 2:
        raise InvalidParameter("max_order must be at least 2.", details=max_order)

    powers = np.arange(1, max_order + 1)

    def raw(eta, beta, density, V, W):
        eta_powers = eta[None, ...] ** powers.reshape(-1, *([1] * eta.ndim))
        return np.concatenate([density[None], (beta * density)[None], eta_powers * density[None]])

    raw_integrals = np.asarray(integrate_over_section(channel, u, raw, tol))
    area = float(raw_integrals[0])
    beta_mean = float(raw_integrals[1] / area)
    eta_moments = (1.0,) + tuple(float(value / area) for value in raw_integrals[2:])
    eta_mean = eta_moments[1]

    def central(eta, beta, density, V, W):
        d_eta, d_beta = eta - eta_mean, beta - beta_mean
        return np.stack([d_eta**2 * density, d_beta**2 * density, d_eta * d_beta * density])

    a, b, c = (float(value / area) for value in integrate_over_section(channel, u, central, tol))
    lambda1, lambda2, theta = principal_axes(a, b, c)

    return MomentSummary(
        u=float(u),
        A=area,
        eta_mean=eta_mean,
        beta_mean=beta_mean,
        eta_moments=eta_moments,
        a=a,
        b=b,
        c=c,
        lambda1=lambda1,
        lambda2=lambda2,
        s1=2.0 * float(np.sqrt(lambda1)),
        s2=2.0 * float(np.sqrt(lambda2)),
        theta=theta,
    )


class MatchedParameters(NamedTuple):
    r1: float
    r2: float
    d1: float
    d2: float


def matched_parameters(r: float) -> MatchedParameters:
    """Ellipse and rectangle sizes whose second moments equal those of ``cardioid(r)``."""
    if not r > 0:
        raise InvalidParameter("r must be positive.", details=r)
    return MatchedParameters(
        r1=float(np.sqrt(7.0) * r),
        r2=float(np.sqrt(47.0) / 3.0 * r),
        d1=float(np.sqrt(21.0) * r),
        d2=float(np.sqrt(47.0 / 3.0) * r),
    )


def max_kappa_eta(channel: ChannelSpec, u) -> np.ndarray:
    """``max`` over the section of ``kappa * eta`` at each ``u``; the channel is narrow where it is below 1."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    kappa = frames(channel.curve, u).kappa
    cos_, sin_ = rotation(channel.transport.angle(u))
    support = np.array([channel.section.support((c, -s)) for c, s in zip(cos_, sin_)])
    return kappa * (channel.transport.p(u) + support)


def check_narrowness(channel: ChannelSpec, u: float) -> None:
    worst = float(max_kappa_eta(channel, u)[0])
    if worst >= 1.0 - FOCAL_MARGIN:
        raise FocalContact(details={"max_kappa_eta": worst}, u=u)


def validate_channel(channel: ChannelSpec, u_grid, auto_center: bool = False, tol: float = DEFAULT_TOL) -> ChannelSpec:
    """
    Check a channel before any computation and return it, recentered if requested.

    Raises ``ConfigError`` for an off-center section without ``auto_center`` and
    ``FocalContact`` at the first grid point where the channel reaches its focal set.
    """
    section = channel.section
    eta0_mean, beta0_mean, _ = section_centroid(section, tol)
    offset = float(np.hypot(eta0_mean, beta0_mean))
    if offset > CENTROID_TOL * 2.0 * section.radius:
        if not auto_center:
            raise ConfigError(
                "Section centroid is not at the base curve; set auto_center to subtract it.",
                details={"centroid": (eta0_mean, beta0_mean)},
            )
        logger.info("Recentering section by (%.6g, %.6g)", -eta0_mean, -beta0_mean)
        channel = ChannelSpec(
            curve=channel.curve,
            section=section.translated(-eta0_mean, -beta0_mean),
            transport=channel.transport,
            bulk_D=channel.bulk_D,
        )

    u_grid = np.atleast_1d(np.asarray(u_grid, dtype=float))
    outside = ~channel.curve.contains(u_grid)
    if np.any(outside):
        raise ConfigError("Grid leaves the curve domain.", details={"u": float(u_grid[outside][0])})

    worst = max_kappa_eta(channel, u_grid)
    touching = worst >= 1.0 - FOCAL_MARGIN
    if np.any(touching):
        index = int(np.argmax(touching))
        raise FocalContact(details={"max_kappa_eta": float(worst[index])}, u=float(u_grid[index]))
    logger.debug("Channel narrow on %d grid points; max kappa*eta %.6f", u_grid.size, float(np.max(worst)))
    return channel
