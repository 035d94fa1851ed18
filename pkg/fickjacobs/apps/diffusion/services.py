# contains the pointwise effective diffusion coefficient, the volume density and grid sweeps
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import integrate

from fickjacobs.apps.curves.services import frame_at
from fickjacobs.apps.diffusion.closed_forms import deff_ellipse_closed, deff_rectangle_closed
from fickjacobs.apps.diffusion.types import (
    DEFAULT_TOL,
    ClosedFormEllipse,
    ClosedFormRectangle,
    DeffMethod,
    DeffProfile,
    Focal,
    Quadrature,
    SecondOrder,
    Series,
)
from fickjacobs.apps.sections.services import check_narrowness, integrate_over_section, moments, rotation
from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.core.exceptions import ChannelError, ConfigError, InvalidParameter, QuadratureFailure

logger = logging.getLogger(__name__)

SERIES_WARN_RADIUS = 0.9
FOCAL_CENTROID_TOL = 1e-8
VOLUME_LIMIT = 200


def _deff_integrals(channel: ChannelSpec, u: float, kappa: float, tol: float) -> tuple[float, float, float]:
    """``(A, int omega / (1 - kappa eta), <eta>)`` at ``u`` in one adaptive pass."""

    def integrand(eta, beta, density, V, W):
        return np.stack([density, density / (1.0 - kappa * eta), eta * density])

    area, focal_integral, eta_integral = integrate_over_section(channel, u, integrand, tol)
    return float(area), float(focal_integral), float(eta_integral / area)


def deff_quadrature(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    kappa = frame_at(channel.curve, u).kappa
    if kappa == 0.0:
        return channel.bulk_D
    check_narrowness(channel, u)
    area, focal_integral, eta_mean = _deff_integrals(channel, u, kappa, tol)
    return channel.bulk_D * (focal_integral / area) / (1.0 - kappa * eta_mean)


def deff_focal(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    """
    𝒟 written with the focal distance ``d_f = (1 - kappa eta) / kappa``:
    ``D / (A kappa) * int omega_S / d_f``. Only valid for sections centered on the base curve.
    """
    kappa = frame_at(channel.curve, u).kappa
    if kappa == 0.0:
        return channel.bulk_D
    check_narrowness(channel, u)

    def integrand(eta, beta, density, V, W):
        return np.stack([density, density * kappa / (1.0 - kappa * eta), eta * density])

    area, inverse_focal, eta_integral = (float(value) for value in integrate_over_section(channel, u, integrand, tol))
    eta_mean = eta_integral / area
    if abs(eta_mean) > FOCAL_CENTROID_TOL * channel.section.radius:
        raise InvalidParameter("Focal form needs <eta> = 0.", details={"eta_mean": eta_mean}, u=u)
    return channel.bulk_D * inverse_focal / (area * kappa)


def _warn_series_radius(channel: ChannelSpec, u: float, kappa: float) -> None:
    cos_, sin_ = rotation(float(channel.transport.angle(u)))
    p = float(channel.transport.p(u))
    reach = max(p + channel.section.support((cos_, -sin_)), channel.section.support((-cos_, sin_)) - p)
    if kappa * reach >= SERIES_WARN_RADIUS:
        logger.warning("Moment series at u=%g evaluated with kappa*max|eta| = %.3f", u, kappa * reach)


def deff_series(channel: ChannelSpec, u: float, order: int = 2, tol: float = DEFAULT_TOL) -> float:
    if order < 0:
        raise InvalidParameter("Series order must be non-negative.", details=order)
    kappa = frame_at(channel.curve, u).kappa
    if kappa == 0.0:
        return channel.bulk_D
    check_narrowness(channel, u)
    _warn_series_radius(channel, u, kappa)
    summary = moments(channel, u, max_order=max(order, 2), tol=tol)
    partial = sum(summary.eta_moments[i] * kappa**i for i in range(order + 1))
    return channel.bulk_D * partial / (1.0 - kappa * summary.eta_mean)


def deff_second_order(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    kappa = frame_at(channel.curve, u).kappa
    if kappa == 0.0:
        return channel.bulk_D
    check_narrowness(channel, u)
    summary = moments(channel, u, max_order=2, tol=tol)
    spread = (summary.s1 / 2) ** 2 * np.cos(summary.theta) ** 2 + (summary.s2 / 2) ** 2 * np.sin(summary.theta) ** 2
    eta_mean = summary.eta_mean
    return channel.bulk_D * (1.0 + eta_mean * kappa + (eta_mean**2 + spread) * kappa**2) / (1.0 - kappa * eta_mean)


def deff_value(channel: ChannelSpec, u: float, method: DeffMethod) -> float:
    """Evaluate 𝒟(u) with the given method."""
    match method:
        case Quadrature(tol=tol):
            return deff_quadrature(channel, u, tol)
        case Series(order=order, tol=tol):
            return deff_series(channel, u, order, tol)
        case SecondOrder(tol=tol):
            return deff_second_order(channel, u, tol)
        case ClosedFormEllipse():
            return deff_ellipse_closed(channel, u)
        case ClosedFormRectangle():
            return deff_rectangle_closed(channel, u)
        case Focal(tol=tol):
            return deff_focal(channel, u, tol)
    raise InvalidParameter(f"Unsupported method {method!r}")


def area_and_volume_density(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``(A(u), omega(u))`` with ``omega = A (1 - kappa <eta>)``."""
    kappa = frame_at(channel.curve, u).kappa

    def integrand(eta, beta, density, V, W):
        return np.stack([density, eta * density])

    area, eta_integral = (float(value) for value in integrate_over_section(channel, u, integrand, tol))
    return area, area - kappa * eta_integral


def volume_density(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    return area_and_volume_density(channel, u, tol)[1]


def volume(channel: ChannelSpec, u: float, tol: float = DEFAULT_TOL) -> float:
    """``V(u) = int_{u1}^{u} omega(s) ds``."""
    start = channel.curve.domain[0]
    if not channel.curve.contains(u):
        raise ConfigError("Volume requested outside the curve domain.", details={"u": u})
    if u == start:
        return 0.0
    # the 1D rule needs fewer digits than each section integral it calls
    result = integrate.quad(
        lambda s: volume_density(channel, s, tol),
        start,
        u,
        epsabs=0.0,
        epsrel=max(tol, 1e-12) * 10,
        limit=VOLUME_LIMIT,
        full_output=1,
    )
    if len(result) > 3:
        raise QuadratureFailure(result[3], details={"abserr": result[1]}, u=u)
    return float(result[0])


def _profile_point(channel: ChannelSpec, method: DeffMethod, tol: float):
    def evaluate(u: float) -> tuple[float, float, float]:
        try:
            area, omega = area_and_volume_density(channel, u, tol)
            return deff_value(channel, u, method), omega, area
        except ChannelError as exc:
            raise exc.at(u)

    return evaluate


def deff_profile(
    channel: ChannelSpec,
    u_grid,
    method: DeffMethod,
    threads: int = 1,
    tol: float = DEFAULT_TOL,
) -> DeffProfile:
    """
    𝒟, omega and A on every grid point.

    Points are independent; with ``threads > 1`` they are spread over a thread pool and the
    output keeps grid order. The first failing point aborts the sweep with its ``u`` attached.
    """
    u_grid = np.asarray(u_grid, dtype=float).ravel()
    if np.any(np.diff(u_grid) <= 0):
        raise InvalidParameter("Profile grid must be strictly increasing.")
    if not np.all(channel.curve.contains(u_grid)):
        raise ConfigError("Grid leaves the curve domain.", details={"domain": channel.curve.domain})

    evaluate = _profile_point(channel, method, tol)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(executor.map(evaluate, u_grid))
    else:
        values = [evaluate(u) for u in u_grid]

    deff, omega, area = (np.array(column) for column in zip(*values)) if values else (np.empty(0),) * 3
    logger.info("Profile with %s on %d points", method.label, u_grid.size)
    return DeffProfile(u_grid=u_grid, deff=deff, omega_vol=omega, area=area, method=method, channel=channel)
