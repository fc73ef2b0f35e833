from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["TimeGrid"]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform mesh ``t_p = p * T / P`` for ``p = 0..P``."""

    P: int
    T: float
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.P, bool) or not isinstance(self.P, (int, np.integer)) or self.P < 2:
            raise ValueError(f"P must be an integer >= 2, got {self.P!r}")
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be > 0, got {self.T!r}")
        object.__setattr__(self, "P", int(self.P))
        object.__setattr__(self, "T", float(self.T))
        pts = np.arange(self.P + 1, dtype=float) * self.dt
        pts[-1] = self.T
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dt(self) -> float:
        return self.T / self.P

    @property
    def midpoints(self) -> np.ndarray:
        """Stage times ``t_{p-1} + dt/2`` for ``p = 1..P``."""
        return self.points[:-1] + 0.5 * self.dt

    def __len__(self):
        return self.P + 1
