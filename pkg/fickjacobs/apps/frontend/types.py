from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from fickjacobs.apps.sections.types import ChannelSpec


@dataclass(frozen=True, eq=False)
class ChannelConfig:
    """A validated channel document: the built channel plus the optional run sections."""

    channel: ChannelSpec
    document: dict[str, Any]
    grid: Optional[np.ndarray] = None
    auto_center: bool = False
    solver: dict[str, Any] = field(default_factory=dict)
    walk: dict[str, Any] = field(default_factory=dict)

    def u_grid(self) -> np.ndarray:
        """The configured grid, or 512 points over the whole curve."""
        if self.grid is not None:
            return self.grid
        s1, s2 = self.channel.curve.domain
        return np.linspace(s1, s2, 512)
