# contains the conservative finite-volume discretization of the reduced equation and its steady states
import logging
import re
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import integrate, linalg

from fickjacobs.apps.diffusion.services import deff_profile, deff_value, volume_density
from fickjacobs.apps.diffusion.types import DEFAULT_TOL, DeffMethod
from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.apps.solver.types import (
    BandedSystem,
    Boundary,
    FixedDensity,
    Grid1D,
    NoFlux,
    Operator,
    SolverConfig,
    SolverState,
)
from fickjacobs.core.exceptions import ChannelError, ConfigError, InvalidParameter, QuadratureFailure, SolverFailure

logger = logging.getLogger(__name__)

RESISTANCE_LIMIT = 400
GAUSSIAN_PATTERN = re.compile(r"^gaussian\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)$")


def _omega_cells(channel: ChannelSpec, centers: np.ndarray, threads: int, tol: float) -> np.ndarray:
    def evaluate(u):
        try:
            return volume_density(channel, u, tol)
        except ChannelError as exc:
            raise exc.at(u)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return np.array(list(executor.map(evaluate, centers)))
    return np.array([evaluate(u) for u in centers])


def assemble(
    channel: ChannelSpec,
    grid: Grid1D,
    deff_method: DeffMethod,
    threads: int = 1,
    tol: float = DEFAULT_TOL,
) -> Operator:
    """Evaluate 𝒟 and omega at the faces and omega at the cell centers of ``grid``."""
    faces = deff_profile(channel, grid.faces, deff_method, threads=threads, tol=tol)
    omega_cells = _omega_cells(channel, grid.centers, threads, tol)
    if np.any(faces.omega_vol <= 0) or np.any(omega_cells <= 0):
        raise SolverFailure("Volume density must be positive on the grid.")
    logger.info("Assembled %d-cell operator with %s", grid.n_cells, deff_method.label)
    return Operator(
        grid=grid,
        omega_cells=omega_cells,
        omega_faces=faces.omega_vol,
        deff_faces=faces.deff,
        method=deff_method,
    )


def boundary_value(bc: Boundary, omega: float) -> float | None:
    """``p / omega`` imposed at a boundary face, or ``None`` for a closed end."""
    if isinstance(bc, NoFlux):
        return None
    if isinstance(bc, FixedDensity):
        return bc.value / omega
    raise InvalidParameter(f"Unknown boundary condition {bc!r}")


def system(operator: Operator, config: SolverConfig) -> BandedSystem:
    """
    Tridiagonal ``L`` and source ``b`` for the boundary conditions in ``config``.

    A fixed density sits on the boundary face, half a cell away from the first unknown.
    """
    grid, omega, K = operator.grid, operator.omega_cells, operator.face_K
    n, h2 = grid.n_cells, grid.du**2
    inner = K[1:-1] / h2

    upper = np.zeros(n)
    lower = np.zeros(n)
    diag = np.zeros(n)
    source = np.zeros(n)

    # column j of L carries the weight 1 / omega_j
    upper[1:] = inner / omega[1:]
    lower[:-1] = inner / omega[:-1]
    diag[:-1] -= inner / omega[:-1]
    diag[1:] -= inner / omega[1:]

    left = boundary_value(config.bc_left, operator.omega_faces[0])
    if left is not None:
        weight = 2.0 * K[0] / h2
        diag[0] -= weight / omega[0]
        source[0] += weight * left
    right = boundary_value(config.bc_right, operator.omega_faces[-1])
    if right is not None:
        weight = 2.0 * K[-1] / h2
        diag[-1] -= weight / omega[-1]
        source[-1] += weight * right

    return BandedSystem(bands=np.stack([upper, diag, lower]), source=source)


def _solve(bands: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        solution = linalg.solve_banded((1, 1), bands, rhs)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolverFailure("Tridiagonal system is singular.", details=str(exc))
    if not np.all(np.isfinite(solution)):
        raise SolverFailure("Tridiagonal solve produced non-finite values.")
    return solution


def step(state: SolverState, config: SolverConfig, operator: Operator) -> SolverState:
    """One theta-scheme step: ``(I - theta dt L) p' = (I + (1 - theta) dt L) p + dt b``."""
    discrete = system(operator, config)
    dt, theta = config.dt, config.theta
    explicit = discrete.apply(state.p) - discrete.source
    rhs = state.p + (1.0 - theta) * dt * explicit + dt * discrete.source
    bands = -theta * dt * discrete.bands
    bands[1] += 1.0
    p = _solve(bands, rhs)
    return SolverState(t=state.t + dt, p=p, face_K=operator.face_K)


def evolve(
    state: SolverState, config: SolverConfig, operator: Operator, n_steps: int, every: int = 1
) -> Iterator[SolverState]:
    """Yield the initial state and every ``every``-th state of ``n_steps`` steps."""
    if every < 1:
        raise InvalidParameter("Output interval must be at least one step.", details=every)
    yield state
    for index in range(1, n_steps + 1):
        state = step(state, config, operator)
        if index % every == 0 or index == n_steps:
            yield state


def steady_state(operator: Operator, config: SolverConfig) -> SolverState:
    """Solve ``L p + b = 0`` directly; two closed ends leave it singular."""
    if isinstance(config.bc_left, NoFlux) and isinstance(config.bc_right, NoFlux):
        raise SolverFailure("No unique steady state with closed ends on both sides.")
    discrete = system(operator, config)
    p = _solve(discrete.bands, -discrete.source)
    return SolverState(t=float("inf"), p=p, face_K=operator.face_K)


def face_fluxes(state: SolverState, operator: Operator, config: SolverConfig) -> np.ndarray:
    """``j`` at the ``n + 1`` faces, boundary faces included."""
    grid = operator.grid
    q = state.p / operator.omega_cells
    K = operator.face_K
    j = np.zeros(grid.n_cells + 1)
    j[1:-1] = -K[1:-1] * np.diff(q) / grid.du
    left = boundary_value(config.bc_left, operator.omega_faces[0])
    if left is not None:
        j[0] = -2.0 * K[0] * (q[0] - left) / grid.du
    right = boundary_value(config.bc_right, operator.omega_faces[-1])
    if right is not None:
        j[-1] = -2.0 * K[-1] * (right - q[-1]) / grid.du
    return j


def total_mass(state: SolverState, grid: Grid1D) -> float:
    return float(np.sum(state.p) * grid.du)


def initial_condition(spec: str, operator: Operator) -> SolverState:
    """
    Initial density from ``"gaussian(mu,sigma)"``, ``"uniform"`` or ``"equilibrium"``.

    The Gaussian is a normalized amount per unit arc length, ``uniform`` is ``p = 1`` and
    ``equilibrium`` is ``p = omega``.
    """
    centers = operator.grid.centers
    text = spec.strip().lower()
    if text == "uniform":
        p = np.ones_like(centers)
    elif text == "equilibrium":
        p = operator.omega_cells.copy()
    elif match := GAUSSIAN_PATTERN.match(text):
        try:
            mu, sigma = float(match.group(1)), float(match.group(2))
        except ValueError:
            raise ConfigError(f"Malformed initial condition {spec!r}")
        if not sigma > 0:
            raise ConfigError("Gaussian width must be positive.", details=sigma)
        p = np.exp(-0.5 * ((centers - mu) / sigma) ** 2) / (sigma * np.sqrt(2.0 * np.pi))
    else:
        raise ConfigError(f"Unknown initial condition {spec!r}")
    return SolverState(t=0.0, p=p, face_K=operator.face_K)


def _quad(function, a: float, b: float, tol: float) -> float:
    result = integrate.quad(function, a, b, epsabs=0.0, epsrel=tol, limit=RESISTANCE_LIMIT, full_output=1)
    if len(result) > 3:
        raise QuadratureFailure(result[3], details={"abserr": result[1]})
    return float(result[0])


def resistance(channel: ChannelSpec, u_min: float, u_max: float, deff_method: DeffMethod, tol: float) -> float:
    """``int du / (𝒟 omega)`` over ``[u_min, u_max]``."""
    return _quad(
        lambda u: 1.0 / (deff_value(channel, u, deff_method) * volume_density(channel, u, tol)),
        u_min,
        u_max,
        max(tol, 1e-12) * 10,
    )


def steady_flux(
    channel: ChannelSpec,
    grid: Grid1D,
    p_left: float,
    p_right: float,
    deff_method: DeffMethod,
    tol: float = DEFAULT_TOL,
) -> float:
    """
    Flux of the steady state with fixed densities at both ends.

    ``j = -[(p/omega)_right - (p/omega)_left] / int du / (𝒟 omega)``; the discrete
    counterpart is ``face_fluxes(steady_state(...))``.
    """
    omega_left = volume_density(channel, grid.u_min, tol)
    omega_right = volume_density(channel, grid.u_max, tol)
    drop = p_right / omega_right - p_left / omega_left
    return -drop / resistance(channel, grid.u_min, grid.u_max, deff_method, tol)


def effective_axial_coefficient(
    channel: ChannelSpec,
    u_min: float,
    u_max: float,
    deff_method: DeffMethod,
    tol: float = DEFAULT_TOL,
) -> float:
    """Long-time axial coefficient ``L^2 / (int omega du * int du / (𝒟 omega))`` over ``[u_min, u_max]``."""
    if not u_min < u_max:
        raise InvalidParameter("Need u_min < u_max.", details=(u_min, u_max))
    volume = _quad(lambda u: volume_density(channel, u, tol), u_min, u_max, max(tol, 1e-12) * 10)
    return (u_max - u_min) ** 2 / (volume * resistance(channel, u_min, u_max, deff_method, tol))
