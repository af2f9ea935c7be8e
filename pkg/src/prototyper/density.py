"""Adaptive target-density schedule and the Prototype result type."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_STEPS = 10


@dataclass(frozen=True)
class DensitySchedule:
    """
    Geometric decay from td_init to td_finish over `steps` outer iterations.

    td(k) = td_init * decay^(k-1), clamped at td_finish; from k = steps + 1
    on the value is exactly td_finish.
    """
    td_init: float = 0.92
    td_finish: float = 0.5
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not (0 < self.td_finish <= self.td_init < 1):
            raise ValueError(
                f"need 0 < td_finish <= td_init < 1, got {self.td_finish}, {self.td_init}"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")

    @classmethod
    def constant(cls, td: float) -> "DensitySchedule":
        return cls(td_init=td, td_finish=td)

    @property
    def decay(self) -> float:
        return (self.td_finish / self.td_init) ** (1.0 / self.steps)

    def target(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"iterations start at 1, got {k}")
        if k - 1 >= self.steps:
            return self.td_finish
        return max(self.td_finish, self.td_init * self.decay ** (k - 1))


@dataclass
class Prototype:
    """Instance centers for every instance (fixed macros included)."""
    positions: np.ndarray
    hpwl: float
    density_used: Optional[float] = None
    iterations: int = 0
    source: str = "internal"


def cluster_centroids(prototype: Prototype, clusters: Sequence, design) -> np.ndarray:
    """Area-weighted mean of member cell centers per cluster, shape (C, 2)."""
    centroids = np.zeros((len(clusters), 2))
    areas = design.sizes[:, 0] * design.sizes[:, 1]
    for cluster in clusters:
        members = np.asarray(cluster.member_cell_ids, dtype=np.int64)
        if members.size == 0:
            centroids[cluster.id] = design.outline.center
            continue
        weights = areas[members]
        if weights.sum() <= 0:
            weights = np.ones(members.size)
        centroids[cluster.id] = np.average(prototype.positions[members], axis=0, weights=weights)
    return centroids
