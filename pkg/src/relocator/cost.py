"""
Relocating penalties and their batch normalization.

Seven raw penalties are computed for each packed candidate; the scalar cost
is the weighted sum of the penalties after min-max normalization over the
candidate batch. A penalty that is constant over the batch contributes 0.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.connectivity import ConnectionMatrix, MacroGroup
from src.netlist import Design
from src.packing import Corner, PackedPlacement, Rect, bbox_area, periphery_distances
from .io_regions import IoRegions
from .layout import CornerLayout
from .notch import notch_area

PENALTY_NAMES = ("disp", "conn", "peri", "group_bb", "corner_bb", "io", "notch")

_SPAN_EPS = 1e-12


@dataclass
class RelocationContext:
    """
    Inputs shared by every candidate of one relocate call.

    positions: (N, 2) instance centers; fixed macros at their packed centers,
        unplaced macros at their ellipse positions.
    centroids: (C, 2) cluster centroids from the last prototype.
    """
    design: Design
    matrix: ConnectionMatrix
    positions: np.ndarray
    centroids: np.ndarray
    io_regions: IoRegions
    notch_threshold: float

    def entity_positions(self) -> np.ndarray:
        macros = self.positions[list(self.design.macro_ids)].reshape(-1, 2)
        return np.vstack([macros, np.asarray(self.centroids, dtype=float).reshape(-1, 2)])


def _centers(rects: Sequence[Rect]) -> np.ndarray:
    arr = np.asarray(rects, dtype=float).reshape(-1, 4)
    return arr[:, :2] + arr[:, 2:] / 2.0


def penalty_vector(
    packed: PackedPlacement,
    group: MacroGroup,
    layout: CornerLayout,
    ctx: RelocationContext,
) -> np.ndarray:
    """Raw (disp, conn, peri, group_bb, corner_bb, io, notch) of a legal packing."""
    design = ctx.design
    members = list(group.member_macro_ids)
    rects = [packed.rects[m] for m in members]
    centers = _centers(rects)

    disp = float(np.linalg.norm(centers - ctx.positions[members], axis=1).sum())

    entities = ctx.entity_positions()
    rows = [design.macro_index[m] for m in members]
    entities[rows] = centers
    dist = np.linalg.norm(centers[:, None, :] - entities[None, :, :], axis=2)
    conn = float((ctx.matrix.A[rows] * dist).sum())

    outline = layout.outline
    peri = float(periphery_distances(np.asarray(rects), outline.width, outline.height).sum())
    group_bb = bbox_area(rects)

    corner_bb = 0.0
    for corner in Corner:
        if corner is packed.corner:
            corner_bb += bbox_area(list(packed.rects.values()))
        else:
            corner_bb += bbox_area(list(layout.corner_rects(corner).values()))

    io = ctx.io_regions.overlap(rects)

    others = layout.obstacles_for(packed.corner)
    notch = notch_area(list(packed.rects.values()), outline, ctx.notch_threshold, obstacles=others)

    return np.array([disp, conn, peri, group_bb, corner_bb, io, notch], dtype=float)


@dataclass(frozen=True)
class PenaltyNormalizer:
    """Per-penalty min/max of a batch; reused unchanged for later comparisons."""
    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def fit(cls, penalties: Sequence[Optional[np.ndarray]]) -> "PenaltyNormalizer":
        rows = [p for p in penalties if p is not None]
        if not rows:
            zeros = np.zeros(len(PENALTY_NAMES))
            return cls(lo=zeros, hi=zeros)
        stack = np.vstack(rows)
        return cls(lo=stack.min(axis=0), hi=stack.max(axis=0))

    def normalize(self, penalty: np.ndarray) -> np.ndarray:
        span = self.hi - self.lo
        live = span > _SPAN_EPS
        out = np.zeros_like(penalty, dtype=float)
        out[live] = (penalty[live] - self.lo[live]) / span[live]
        return out

    def scalar(self, penalty: Optional[np.ndarray], weights: np.ndarray) -> float:
        if penalty is None:
            return float("inf")
        return float(np.dot(weights, self.normalize(penalty)))


def evaluate_cost(
    penalties: Sequence[Optional[np.ndarray]],
    weights: np.ndarray,
) -> tuple[list[float], PenaltyNormalizer]:
    """Scalar costs of a batch; None marks an infeasible candidate (cost +inf)."""
    normalizer = PenaltyNormalizer.fit(penalties)
    return [normalizer.scalar(p, weights) for p in penalties], normalizer
