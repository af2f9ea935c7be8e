"""
Contour-based packing of a corner tree.

Packing runs in the corner's local frame (corner at the origin, axes
pointing inward) and mirrors the result into chip coordinates.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from src.netlist import ChipOutline
from .contour import Contour
from .geometry import GEOM_TOL, Rect, inflate, rects_intersect
from .tree import Corner, PackingTree, NIL


@dataclass
class PackedPlacement:
    """Chip-coordinate (x, y, w, h) per packed macro plus legality flags."""
    corner: Corner
    rects: dict[int, Rect] = field(default_factory=dict)
    out_of_bounds: bool = False
    overlap_other_corner: bool = False
    moved_fixed: bool = False
    contour: Optional[Contour] = None

    @property
    def legal(self) -> bool:
        return not (self.out_of_bounds or self.overlap_other_corner or self.moved_fixed)

    def rect_array(self) -> np.ndarray:
        return np.array(list(self.rects.values()), dtype=float).reshape(-1, 4)


def mirror(corner: Corner, x: float, y: float, w: float, h: float, outline: ChipOutline) -> tuple[float, float]:
    """Lower-left chip coordinates of a rectangle placed at local (x, y)."""
    W, H = outline.width, outline.height
    if corner is Corner.BL:
        return x, y
    if corner is Corner.BR:
        return W - x - w, y
    if corner is Corner.TL:
        return x, H - y - h
    return W - x - w, H - y - h


def pack(
    tree: PackingTree,
    outline: ChipOutline,
    sizes: np.ndarray,
    halo: float = 0.0,
    obstacles: Sequence[Rect] = (),
    reference: Optional[Mapping[int, Rect]] = None,
) -> PackedPlacement:
    """
    Pack a tree into its corner.

    Args:
        sizes: (M, 2) widths and heights indexed by macro id.
        halo: Spacing added around every macro while packing.
        obstacles: Chip-coordinate rectangles the packed macros (with halo)
            must not intersect, e.g. other corners and blockages.
        reference: Previous rectangles of already fixed macros; any deviation
            sets moved_fixed.
    """
    placed = PackedPlacement(corner=tree.corner)
    contour = Contour()
    placed.contour = contour
    if tree.root == NIL:
        return placed

    local_x: dict[int, float] = {tree.root: 0.0}
    for idx in tree.preorder():
        node = tree.nodes[idx]
        w, h = (float(v) for v in sizes[node.macro_id])
        fw, fh = w + 2 * halo, h + 2 * halo
        x = local_x[idx]
        y = contour.max_height(x, x + fw)
        contour.raise_to(x, x + fw, y + fh)
        if node.left != NIL:
            local_x[node.left] = x + fw
        if node.right != NIL:
            local_x[node.right] = x
        cx, cy = mirror(tree.corner, x + halo, y + halo, w, h, outline)
        placed.rects[node.macro_id] = (cx, cy, w, h)

    W, H = outline.width, outline.height
    for mid, rect in placed.rects.items():
        x, y, w, h = rect
        if x < -GEOM_TOL or y < -GEOM_TOL or x + w > W + GEOM_TOL or y + h > H + GEOM_TOL:
            placed.out_of_bounds = True
        if any(rects_intersect(inflate(rect, halo), obs) for obs in obstacles):
            placed.overlap_other_corner = True
        if reference is not None and mid in reference:
            ref = reference[mid]
            if max(abs(a - b) for a, b in zip(rect, ref)) > GEOM_TOL:
                placed.moved_fixed = True
    return placed
