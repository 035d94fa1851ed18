# contains the reflected Brownian walk inside the exact channel region used to check the reduced model
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

import numpy as np

from fickjacobs.apps.brownian.types import ChannelCoords, WalkConfig, WalkStatistics
from fickjacobs.apps.curves.services import frames
from fickjacobs.apps.sections.services import moments, transport, untwist
from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.core.exceptions import FocalAmbiguity, InvalidParameter, OutsideDomain, StepTooLarge

logger = logging.getLogger(__name__)

SCAN_POINTS = 256
SCAN_CHUNK = 4096
NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-13
STEP_GUARD = 5.0
RESOLUTION_FRACTION = 0.2
VOLUME_CHUNK = 20000


class Projection(NamedTuple):
    """Vectorized nearest-point data; ``ok`` is false where no admissible foot point exists."""

    u: np.ndarray
    eta: np.ndarray
    beta: np.ndarray
    ok: np.ndarray
    focal: np.ndarray


def _wrap(channel: ChannelSpec, u: np.ndarray) -> np.ndarray:
    s1, s2 = channel.curve.domain
    if channel.curve.periodic:
        return s1 + np.mod(u - s1, s2 - s1)
    return np.clip(u, s1, s2)


def _scan(channel: ChannelSpec, X: np.ndarray, u_min: float, u_max: float) -> np.ndarray:
    """Closest of ``SCAN_POINTS`` curve samples to each point, as a Newton start."""
    grid = np.linspace(u_min, u_max, SCAN_POINTS)
    samples = channel.curve.position(grid)
    start = np.empty(len(X))
    for offset in range(0, len(X), SCAN_CHUNK):
        chunk = X[offset : offset + SCAN_CHUNK]
        distance = np.sum((chunk[:, None, :] - samples[None, :, :]) ** 2, axis=-1)
        start[offset : offset + SCAN_CHUNK] = grid[np.argmin(distance, axis=1)]
    return start


def project(
    channel: ChannelSpec,
    X,
    u_guess: Optional[np.ndarray] = None,
    max_step: Optional[float] = None,
) -> Projection:
    """
    Foot points ``u`` with ``(x - alpha(u)) . T(u) = 0`` for an ``(n, 3)`` array of points.

    Newton's update is ``u += g / (1 - kappa eta)`` with ``g = (x - alpha) . T``. Started
    from ``u_guess`` the iterate may not leave ``u_guess +- max_step``; without a guess it
    starts from a scan over the curve. Points whose root leaves the domain or is not found
    are reported with ``ok = False``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    s1, s2 = channel.curve.domain
    if u_guess is None:
        u = _scan(channel, X, s1, s2)
        low, high = np.full(len(X), -np.inf), np.full(len(X), np.inf)
    else:
        u = np.asarray(u_guess, dtype=float).copy()
        reach = np.inf if max_step is None else max_step
        low, high = u - reach, u + reach

    converged = np.zeros(len(X), dtype=bool)
    frame = frames(channel.curve, _wrap(channel, u))
    for iteration in range(NEWTON_MAX_ITER):
        offset = X - frame.position
        g = np.einsum("ij,ij->i", offset, frame.T)
        eta = np.einsum("ij,ij->i", offset, frame.N)
        denominator = 1.0 - frame.kappa * eta
        safe = np.where(denominator > 0, denominator, 1.0)
        update = np.where(converged, 0.0, g / safe)
        u_next = np.clip(u + update, low, high)
        if not channel.curve.periodic:
            u_next = np.clip(u_next, s1, s2)
        converged = converged | (np.abs(u_next - u) <= NEWTON_TOL * max(1.0, s2 - s1))
        u = u_next
        frame = frames(channel.curve, _wrap(channel, u))
        if np.all(converged):
            break
    logger.debug("Projection of %d points took %d Newton iterations", len(X), iteration + 1)

    offset = X - frame.position
    g = np.einsum("ij,ij->i", offset, frame.T)
    eta = np.einsum("ij,ij->i", offset, frame.N)
    beta = np.einsum("ij,ij->i", offset, frame.B)
    scale = 1.0 + np.linalg.norm(offset, axis=-1)
    on_normal_plane = np.abs(g) <= 1e-9 * scale
    focal = 1.0 - frame.kappa * eta <= 0.0
    ok = converged & on_normal_plane & ~focal
    return Projection(u=_wrap(channel, u), eta=eta, beta=beta, ok=ok, focal=focal)


def to_channel_coords(channel: ChannelSpec, x, u_guess: Optional[float] = None) -> ChannelCoords:
    """``(u, eta, beta)`` of a single point, with ``x = alpha(u) + eta N(u) + beta B(u)``."""
    guess = None if u_guess is None else np.array([float(u_guess)])
    result = project(channel, np.asarray(x, dtype=float).reshape(1, 3), guess)
    if result.focal[0]:
        raise FocalAmbiguity(details={"eta": float(result.eta[0])}, u=float(result.u[0]))
    if not result.ok[0]:
        raise OutsideDomain(details={"x": np.asarray(x, dtype=float).tolist()})
    return ChannelCoords(u=float(result.u[0]), eta=float(result.eta[0]), beta=float(result.beta[0]))


def _contained(channel: ChannelSpec, projection: Projection) -> np.ndarray:
    eta0, beta0 = untwist(channel, projection.u, projection.eta, projection.beta)
    return projection.ok & channel.section.contains(eta0, beta0)


def inside_many(
    channel: ChannelSpec,
    X,
    u_guess: Optional[np.ndarray] = None,
    max_step: Optional[float] = None,
) -> tuple[np.ndarray, Projection]:
    """Membership of each row of ``X`` in the channel region, with the projections used."""
    projection = project(channel, X, u_guess, max_step)
    return _contained(channel, projection), projection


def inside(channel: ChannelSpec, x) -> bool:
    mask, _ = inside_many(channel, np.asarray(x, dtype=float).reshape(1, 3))
    return bool(mask[0])


def _section_box(channel: ChannelSpec) -> tuple[np.ndarray, np.ndarray]:
    boundary = channel.section.boundary
    return boundary.min(axis=0), boundary.max(axis=0)


def sample_section_points(channel: ChannelSpec, u: float, n: int, rng: np.random.Generator):
    """``n`` points ``(eta, beta)`` uniform in the cross-section at ``u``, by rejection in its bounding box."""
    low, high = _section_box(channel)
    eta0 = np.empty(0)
    beta0 = np.empty(0)
    while eta0.size < n:
        candidates = rng.uniform(low, high, size=(2 * (n - eta0.size) + 16, 2))
        keep = channel.section.contains(candidates[:, 0], candidates[:, 1])
        eta0 = np.concatenate([eta0, candidates[keep, 0]])
        beta0 = np.concatenate([beta0, candidates[keep, 1]])
    return transport(channel, u, eta0[:n], beta0[:n])


def _embed(channel: ChannelSpec, u, eta, beta) -> np.ndarray:
    frame = frames(channel.curve, u)
    return frame.position + eta[:, None] * frame.N + beta[:, None] * frame.B


def sample_channel_points(
    channel: ChannelSpec, n: int, rng: np.random.Generator, start_u: Optional[float] = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    ``n`` points uniform in the channel volume, or in the thin slab at ``start_u``.

    A uniform point in ``(u, section)`` is kept with probability proportional to the volume
    element ``1 - kappa eta``.
    """
    s1, s2 = channel.curve.domain
    check = np.linspace(s1, s2, SCAN_POINTS)
    kappa_max = float(np.max(frames(channel.curve, check).kappa))
    offset_max = float(np.max(np.abs(channel.transport.p(check))))
    bound = 1.0 + kappa_max * (channel.section.radius + offset_max)
    low, high = _section_box(channel)

    u_kept, points = np.empty(0), np.empty((0, 3))
    while u_kept.size < n:
        m = 2 * (n - u_kept.size) + 16
        u = np.full(m, float(start_u)) if start_u is not None else rng.uniform(s1, s2, m)
        candidates = rng.uniform(low, high, size=(m, 2))
        weight_draw = rng.uniform(0.0, bound, m)
        keep = channel.section.contains(candidates[:, 0], candidates[:, 1])
        u, candidates, weight_draw = u[keep], candidates[keep], weight_draw[keep]
        eta, beta = transport(channel, u, candidates[:, 0], candidates[:, 1])
        volume_element = 1.0 - frames(channel.curve, u).kappa * eta
        accept = weight_draw < volume_element
        u_kept = np.concatenate([u_kept, u[accept]])
        points = np.concatenate([points, _embed(channel, u[accept], eta[accept], beta[accept])])
    return u_kept[:n], points[:n]


def hit_or_miss_volume(channel: ChannelSpec, u_max: float, n: int, seed: int) -> tuple[float, float]:
    """
    Volume of the channel piece with ``u <= u_max`` by uniform sampling of a bounding box.

    Returns the estimate and its binomial standard error.
    """
    s1, _ = channel.curve.domain
    if not channel.curve.contains(u_max) or u_max <= s1:
        raise InvalidParameter("u_max must lie inside the curve domain.", details=u_max)
    grid = np.linspace(s1, u_max, SCAN_POINTS)
    centers = channel.curve.position(grid)
    reach = channel.section.radius + float(
        np.max(np.hypot(channel.transport.p(grid), channel.transport.q(grid)))
    )
    low, high = centers.min(axis=0) - reach, centers.max(axis=0) + reach
    box_volume = float(np.prod(high - low))

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    hits = 0
    for offset in range(0, n, VOLUME_CHUNK):
        X = rng.uniform(low, high, size=(min(VOLUME_CHUNK, n - offset), 3))
        mask, projection = inside_many(channel, X)
        hits += int(np.count_nonzero(mask & (projection.u <= u_max)))
    fraction = hits / n
    return box_volume * fraction, box_volume * float(np.sqrt(fraction * (1.0 - fraction) / n))


def check_resolution(channel: ChannelSpec, config: WalkConfig) -> None:
    s1, s2 = channel.curve.domain
    smallest = min(moments(channel, u, max_order=2).s2 for u in (s1, 0.5 * (s1 + s2), s2))
    if config.step_length >= RESOLUTION_FRACTION * smallest:
        raise StepTooLarge(details={"step": config.step_length, "section_size": smallest})


class _BatchResult(NamedTuple):
    msd_sum: np.ndarray
    count: int
    accepted: int
    proposed: int
    trajectories: Optional[np.ndarray]


def _run_batch(channel: ChannelSpec, config: WalkConfig, size: int, seed: np.random.SeedSequence) -> _BatchResult:
    rng = np.random.Generator(np.random.Philox(seed))
    length = channel.curve.length
    u, X = sample_channel_points(channel, size, rng, config.start_u)
    u_start = u.copy()
    unwrapped = u.copy()
    step_length = config.step_length
    guard = STEP_GUARD * step_length

    record_steps = range(0, config.n_steps + 1, config.record_every)
    msd_sum = np.zeros(len(record_steps))
    trajectory = np.empty((len(record_steps), size, 3)) if config.keep_trajectories else None
    eta, beta = eta_beta_of(channel, u, X)
    if trajectory is not None:
        trajectory[0] = np.column_stack([unwrapped, eta, beta])

    accepted = 0
    record = 1
    for index in range(1, config.n_steps + 1):
        proposal = X + step_length * rng.standard_normal((size, 3))
        mask, projection = inside_many(channel, proposal, u_guess=u, max_step=guard)
        if config.check_inside and np.any(mask):
            fresh, _ = inside_many(channel, proposal[mask])
            if not np.all(fresh):
                raise OutsideDomain("Accepted a move outside the channel.", details={"step": index})
        moved = projection.u[mask] - u[mask]
        if channel.curve.periodic:
            moved = moved - length * np.round(moved / length)
        unwrapped[mask] += moved
        u[mask] = projection.u[mask]
        X[mask] = proposal[mask]
        eta[mask], beta[mask] = projection.eta[mask], projection.beta[mask]
        accepted += int(np.count_nonzero(mask))

        if index % config.record_every == 0:
            msd_sum[record] = float(np.sum((unwrapped - u_start) ** 2))
            if trajectory is not None:
                trajectory[record] = np.column_stack([unwrapped, eta, beta])
            record += 1

    return _BatchResult(msd_sum, size, accepted, size * config.n_steps, trajectory)


def eta_beta_of(channel: ChannelSpec, u: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    frame = frames(channel.curve, u)
    offset = X - frame.position
    return np.einsum("ij,ij->i", offset, frame.N), np.einsum("ij,ij->i", offset, frame.B)


def _long_time_slope(times: np.ndarray, msd: np.ndarray) -> float:
    tail = times >= 0.5 * times[-1]
    if np.count_nonzero(tail) < 2:
        return float(msd[-1] / times[-1])
    return float(np.polyfit(times[tail], msd[tail], 1)[0])


def simulate(channel: ChannelSpec, config: WalkConfig, threads: int = 1) -> WalkStatistics:
    """
    Reflected walk with rejected moves; the axial coefficient is half the long-time slope of
    ``<(u(t) - u(0))^2>``, fitted over the second half of the run. Its error bar comes from
    the spread of the per-batch estimates.
    """
    if abs(channel.bulk_D - config.bulk_D) > 1e-12 * channel.bulk_D:
        logger.warning("Walk uses D=%g while the channel declares D=%g", config.bulk_D, channel.bulk_D)
    check_resolution(channel, config)

    batches = min(config.batches, config.n_particles)
    sizes = [len(part) for part in np.array_split(np.arange(config.n_particles), batches)]
    streams = np.random.SeedSequence(config.seed).spawn(batches)
    jobs = list(zip(sizes, streams))

    def run(job):
        size, stream = job
        return _run_batch(channel, config, size, stream)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    times = np.arange(0, config.n_steps + 1, config.record_every) * config.dt
    msd = sum(result.msd_sum for result in results) / config.n_particles
    estimate = 0.5 * _long_time_slope(times, msd)
    batch_estimates = np.array([0.5 * _long_time_slope(times, r.msd_sum / r.count) for r in results])
    stderr = float(np.std(batch_estimates, ddof=1) / np.sqrt(batches)) if batches > 1 else float("nan")
    acceptance = sum(r.accepted for r in results) / max(sum(r.proposed for r in results), 1)
    trajectories = (
        np.concatenate([r.trajectories for r in results], axis=1) if config.keep_trajectories else None
    )
    logger.info(
        "Walk of %d particles over %d steps: estimate %.6g +- %.2g, acceptance %.4f",
        config.n_particles,
        config.n_steps,
        estimate,
        stderr,
        acceptance,
    )
    return WalkStatistics(
        times=times,
        msd_u=msd,
        estimate=estimate,
        stderr=stderr,
        batch_estimates=batch_estimates,
        acceptance=acceptance,
        trajectories=trajectories,
    )
