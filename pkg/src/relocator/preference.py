"""
Group-to-corner preference matrix.

Pref[i, j] = a1 * area(group i)
           - (a2 * util(corner j) + a3 * io(corner j) + a4 * dist(group i, corner j))

A corner whose quadrant is more than half covered by I/O keepouts is banned
for every group. Masked entries are -inf and never selected.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.connectivity import MacroGroup
from src.errors import AllBannedError
from src.netlist import ChipOutline, Design
from src.packing import Corner
from .io_regions import IoRegions, corner_point, quadrant

CORNERS = tuple(Corner)

DEFAULT_WEIGHTS = (0.4, 0.4, 1.0, 1.6, 1.6, 1.6, 1.0)
DEFAULT_ALPHAS = (5.0, 0.5, 4.0, 1.0)


@dataclass(frozen=True)
class CostWeights:
    """w: weights of the seven relocating penalties; alpha: preference coefficients."""
    w: tuple[float, ...] = DEFAULT_WEIGHTS
    alpha: tuple[float, ...] = DEFAULT_ALPHAS

    def __post_init__(self):
        if len(self.w) != 7 or len(self.alpha) != 4:
            raise ValueError("expected 7 cost weights and 4 preference coefficients")
        for value in (*self.w, *self.alpha):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"weights must be finite and non-negative, got {value}")

    @property
    def w_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


@dataclass
class PreferenceMatrix:
    """Rows follow group_ids, columns follow Corner order."""
    values: np.ndarray
    group_ids: list[int]
    banned_corners: tuple[Corner, ...] = ()
    terms: dict = field(default_factory=dict)

    @property
    def all_banned(self) -> bool:
        return not np.isfinite(self.values).any()

    def mask(self, row: int, corner: Corner) -> None:
        self.values[row, int(corner)] = -np.inf

    def row_banned(self, row: int) -> bool:
        return not np.isfinite(self.values[row]).any()

    def best(self) -> tuple[int, Corner]:
        """Row and corner of the maximum; ties go to the lower row, then the lower corner."""
        if self.all_banned:
            raise AllBannedError("every group-corner assignment is banned")
        flat = int(np.argmax(self.values))
        row, col = divmod(flat, len(CORNERS))
        return row, Corner(col)


def gravity_center(group: MacroGroup, positions: np.ndarray, design: Design) -> np.ndarray:
    """Area-weighted mean of the group members' current centers (instance-indexed positions)."""
    members = np.asarray(group.member_macro_ids, dtype=np.int64)
    areas = design.sizes[members, 0] * design.sizes[members, 1]
    return np.average(positions[members], axis=0, weights=areas)


def _normalized(term: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(term))) if term.size else 0.0
    return term / peak if peak > 0 else term


def compute_preference(
    groups: Sequence[MacroGroup],
    design: Design,
    positions: np.ndarray,
    corner_util: Sequence[float],
    io_regions: IoRegions,
    weights: CostWeights,
    normalize: bool = False,
) -> PreferenceMatrix:
    """
    Build the preference matrix for the still unplaced groups.

    Args:
        positions: (N, 2) current instance centers; unplaced macros sit at
            their ellipse positions.
        corner_util: Packed macro area per corner, in Corner order.
        normalize: Scale each term by its largest magnitude before weighting.
    """
    outline: ChipOutline = design.outline
    a1, a2, a3, a4 = weights.alpha
    n = len(groups)

    group_area = np.array(
        [sum(design.instances[m].area for m in g.member_macro_ids) for g in groups], dtype=float
    )
    util = np.asarray(corner_util, dtype=float)
    io = np.array([io_regions.area_within(quadrant(outline, c)) for c in CORNERS])
    quadrant_area = outline.area / 4.0
    banned = tuple(c for c in CORNERS if io[int(c)] > 0.5 * quadrant_area)

    points = np.array([corner_point(outline, c) for c in CORNERS])
    centers = np.array([gravity_center(g, positions, design) for g in groups]).reshape(-1, 2)
    dist = np.linalg.norm(centers[:, None, :] - points[None, :, :], axis=2) if n else np.zeros((0, 4))

    area_term = np.repeat(group_area[:, None], 4, axis=1)
    util_term = np.repeat(util[None, :], n, axis=0)
    io_term = np.repeat(io[None, :], n, axis=0)
    if normalize:
        area_term, util_term, io_term, dist = (
            _normalized(t) for t in (area_term, util_term, io_term, dist)
        )

    values = a1 * area_term - (a2 * util_term + a3 * io_term + a4 * dist)
    for corner in banned:
        values[:, int(corner)] = -np.inf

    pref = PreferenceMatrix(
        values=values,
        group_ids=[g.id for g in groups],
        banned_corners=banned,
        terms={"area": group_area, "util": util, "io": io, "dist": dist},
    )
    if n and pref.all_banned:
        raise AllBannedError(
            f"all corners are I/O banned ({', '.join(c.name for c in banned)})"
        )
    return pref
