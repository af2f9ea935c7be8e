"""Per-run analysis results and the evolving state of the outer loop."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from src.abplace import Ellipse
from src.connectivity import CellCluster, ConnectionMatrix, MacroGroup
from src.packing import Rect
from src.prototyper import Prototype
from src.relocator import PENALTY_NAMES, CornerLayout, IoRegions


@dataclass(frozen=True)
class Analysis:
    """Everything computed once per run before the outer loop starts."""
    groups: tuple[MacroGroup, ...]
    clusters: tuple[CellCluster, ...]
    matrix: ConnectionMatrix
    io_regions: IoRegions
    notch_threshold: float


@dataclass
class IterationRecord:
    k: int
    target_density: Optional[float]
    ellipse_scale: Optional[float]
    abplace_initial: Optional[float]
    abplace_final: Optional[float]
    newly_placed: list[int]
    remaining_groups: list[int]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "target_density": self.target_density,
            "ellipse_scale": self.ellipse_scale,
            "abplace_initial": self.abplace_initial,
            "abplace_final": self.abplace_final,
            "newly_placed": list(self.newly_placed),
            "remaining_groups": list(self.remaining_groups),
        }


@dataclass
class RunState:
    """
    State after outer iteration k (k = 0 before the first iteration).

    Pre-placed macros are in the layout from k = 0 on; fixed rectangles are
    never changed once they enter it.
    """
    k: int
    layout: CornerLayout
    unplaced_groups: list[MacroGroup]
    ellipse: Optional[Ellipse] = None
    prototype: Optional[Prototype] = None
    history: list[IterationRecord] = field(default_factory=list)
    penalty_sums: np.ndarray = field(default_factory=lambda: np.zeros(len(PENALTY_NAMES)))

    @property
    def placed(self) -> dict[int, Rect]:
        return self.layout.placed

    @property
    def unplaced_macros(self) -> list[int]:
        return sorted(m for g in self.unplaced_groups for m in g.member_macro_ids)

    @property
    def done(self) -> bool:
        return not self.unplaced_groups

    def advance(self, **changes) -> RunState:
        return replace(self, **changes)
