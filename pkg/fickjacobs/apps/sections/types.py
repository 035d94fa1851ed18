from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional

import numpy as np
from numpy.polynomial import Polynomial

from fickjacobs.apps.curves.services import reparametrize_arclength
from fickjacobs.apps.curves.types import CurveSpec
from fickjacobs.core.exceptions import InvalidParameter

SectionCallable = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
Membership = Callable[[np.ndarray, np.ndarray], np.ndarray]
Offset = Callable[[np.ndarray], np.ndarray]

JACOBIAN_STEP = 1e-6
SUPPORT_SAMPLES = 8193


@dataclass(frozen=True, eq=False)
class SectionMap:
    """
    A planar region R0 parametrized by ``(v, w) -> (eta0, beta0)``.

    ``orientation`` is the sign of the Jacobian on the interior, so ``orientation * jacobian``
    is the nonnegative area density. Builtins supply an analytic ``jacobian`` and
    ``support_function``; otherwise both are computed numerically.
    """

    map: SectionCallable
    domain: tuple[tuple[float, float], tuple[float, float]]
    membership: Membership
    centroid_zero: bool = True
    jacobian: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    support_function: Optional[Callable[[np.ndarray], float]] = None
    orientation: int = 1
    kind: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        (v1, v2), (w1, w2) = self.domain
        if not (v1 < v2 and w1 < w2):
            raise InvalidParameter("Section domain must be a nonempty rectangle.", details=self.domain)
        if self.orientation not in (-1, 1):
            raise InvalidParameter("Section orientation must be +1 or -1.", details=self.orientation)

    @property
    def v_range(self) -> tuple[float, float]:
        return self.domain[0]

    @property
    def w_range(self) -> tuple[float, float]:
        return self.domain[1]

    def signed_jacobian(self, V, W) -> np.ndarray:
        V, W = np.broadcast_arrays(np.asarray(V, dtype=float), np.asarray(W, dtype=float))
        if self.jacobian is not None:
            return np.broadcast_to(np.asarray(self.jacobian(V, W), dtype=float), V.shape)
        hv = JACOBIAN_STEP * (self.v_range[1] - self.v_range[0])
        hw = JACOBIAN_STEP * (self.w_range[1] - self.w_range[0])
        eta_vp, beta_vp = self.map(V + hv, W)
        eta_vm, beta_vm = self.map(V - hv, W)
        eta_wp, beta_wp = self.map(V, W + hw)
        eta_wm, beta_wm = self.map(V, W - hw)
        eta_v, beta_v = (eta_vp - eta_vm) / (2 * hv), (beta_vp - beta_vm) / (2 * hv)
        eta_w, beta_w = (eta_wp - eta_wm) / (2 * hw), (beta_wp - beta_wm) / (2 * hw)
        return eta_v * beta_w - eta_w * beta_v

    def area_density(self, V, W) -> np.ndarray:
        """Nonnegative area density ``|omega_S0|``."""
        return self.orientation * self.signed_jacobian(V, W)

    def boundary_samples(self, n: int = SUPPORT_SAMPLES) -> np.ndarray:
        (v1, v2), (w1, w2) = self.domain
        t = np.linspace(0.0, 1.0, n)
        v = np.concatenate([v1 + (v2 - v1) * t, np.full(n, v2), v2 - (v2 - v1) * t, np.full(n, v1)])
        w = np.concatenate([np.full(n, w1), w1 + (w2 - w1) * t, np.full(n, w2), w2 - (w2 - w1) * t])
        eta, beta = self.map(v, w)
        return np.stack([eta, beta], axis=-1)

    @cached_property
    def boundary(self) -> np.ndarray:
        return self.boundary_samples()

    def support(self, direction) -> float:
        """``max`` over the region of ``(eta0, beta0) . direction``."""
        direction = np.asarray(direction, dtype=float)
        if self.support_function is not None:
            return float(self.support_function(direction))
        return float(np.max(self.boundary @ direction))

    @property
    def radius(self) -> float:
        """Largest distance of a region point from the (eta0, beta0) origin."""
        return float(np.max(np.linalg.norm(self.boundary, axis=-1)))

    def contains(self, eta0, beta0) -> np.ndarray:
        return np.asarray(self.membership(np.asarray(eta0, dtype=float), np.asarray(beta0, dtype=float)), dtype=bool)

    def translated(self, d_eta: float, d_beta: float) -> "SectionMap":
        """The same region shifted by ``(d_eta, d_beta)``; used to recenter a section."""
        shift = np.array([d_eta, d_beta], dtype=float)
        support = None
        if self.support_function is not None:
            original = self.support_function
            support = lambda direction: original(direction) + float(shift @ direction)  # noqa: E731

        def shifted_map(V, W):
            eta0, beta0 = self.map(V, W)
            return eta0 + d_eta, beta0 + d_beta

        return SectionMap(
            map=shifted_map,
            domain=self.domain,
            membership=lambda eta0, beta0: self.membership(eta0 - d_eta, beta0 - d_beta),
            centroid_zero=True,
            jacobian=self.jacobian,
            support_function=support,
            orientation=self.orientation,
            kind="custom",
            params={**self.params, "shift": (float(d_eta), float(d_beta)), "shifted_kind": self.kind},
        )


def as_offset(value) -> Offset:
    """Accept a number, a coefficient sequence or a callable and return a vectorized offset."""
    if callable(value):
        return value
    if np.ndim(value) == 0:
        return Polynomial([float(value)])
    return Polynomial(np.asarray(value, dtype=float))


@dataclass(frozen=True, eq=False)
class TwistOffset:
    """Rigid transport of R0 along the curve: rotation by ``omega * u`` plus offsets ``(p(u), q(u))``."""

    omega: float = 0.0
    p: Offset = field(default_factory=lambda: Polynomial([0.0]))
    q: Offset = field(default_factory=lambda: Polynomial([0.0]))

    def __post_init__(self):
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "p", as_offset(self.p))
        object.__setattr__(self, "q", as_offset(self.q))

    def angle(self, u) -> np.ndarray:
        return self.omega * np.asarray(u, dtype=float)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    curve: CurveSpec
    section: SectionMap
    transport: TwistOffset = field(default_factory=TwistOffset)
    bulk_D: float = 1.0

    def __post_init__(self):
        if not self.bulk_D > 0:
            raise InvalidParameter("bulk_D must be positive.", details=self.bulk_D)
        if not self.curve.is_arclength:
            object.__setattr__(self, "curve", reparametrize_arclength(self.curve))
        object.__setattr__(self, "bulk_D", float(self.bulk_D))

    def with_transport(self, **changes) -> "ChannelSpec":
        transport = TwistOffset(
            omega=changes.get("omega", self.transport.omega),
            p=changes.get("p", self.transport.p),
            q=changes.get("q", self.transport.q),
        )
        return ChannelSpec(curve=self.curve, section=self.section, transport=transport, bulk_D=self.bulk_D)


@dataclass(frozen=True)
class MomentSummary:
    u: float
    A: float
    eta_mean: float
    beta_mean: float
    eta_moments: tuple[float, ...]
    a: float
    b: float
    c: float
    lambda1: float
    lambda2: float
    s1: float
    s2: float
    theta: float

    @property
    def max_order(self) -> int:
        return len(self.eta_moments) - 1
