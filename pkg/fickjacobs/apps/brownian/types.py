from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from fickjacobs.core.exceptions import InvalidParameter

DEFAULT_BATCHES = 16


@dataclass(frozen=True)
class WalkConfig:
    """
    Parameters of a reflected Brownian walk.

    Particles start uniformly in the channel volume, or uniformly in the slab at ``start_u``
    when it is given. They are split into ``batches`` fixed groups, each drawing from its own
    random stream, so results do not depend on how batches are scheduled.
    """

    n_particles: int
    dt: float
    t_final: float
    seed: int
    bulk_D: float = 1.0
    batches: int = DEFAULT_BATCHES
    record_every: int = 1
    start_u: Optional[float] = None
    keep_trajectories: bool = False
    check_inside: bool = False

    def __post_init__(self):
        if self.n_particles < 1:
            raise InvalidParameter("Need at least one particle.", details=self.n_particles)
        if not self.dt > 0:
            raise InvalidParameter("Time step must be positive.", details=self.dt)
        if not self.t_final >= self.dt:
            raise InvalidParameter("t_final must cover at least one step.", details=self.t_final)
        if not self.bulk_D > 0:
            raise InvalidParameter("bulk_D must be positive.", details=self.bulk_D)
        if self.batches < 1 or self.record_every < 1:
            raise InvalidParameter("batches and record_every must be positive.")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter("Seed must be a 64-bit unsigned integer.", details=self.seed)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def step_length(self) -> float:
        return float(np.sqrt(2.0 * self.bulk_D * self.dt))


class ChannelCoords(NamedTuple):
    u: float
    eta: float
    beta: float


@dataclass(frozen=True, eq=False)
class WalkStatistics:
    times: np.ndarray
    msd_u: np.ndarray
    estimate: float
    stderr: float
    batch_estimates: np.ndarray
    acceptance: float
    trajectories: Optional[np.ndarray] = None

    def rows(self):
        for t, msd in zip(self.times, self.msd_u):
            yield {"t": t, "msd_u": msd, "estimate": self.estimate, "stderr": self.stderr}
