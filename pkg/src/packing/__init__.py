"""
Packing module for macroforge.

Per-corner B*-trees, contour packing and tree mutation operators.
"""

from .tree import (
    NIL,
    Corner,
    TreeNode,
    SlotRef,
    PackingTree,
    enumerate_slots,
    attach_subtree,
    detach_subtree,
)
from .contour import Contour
from .geometry import (
    Rect,
    GEOM_TOL,
    rects_intersect,
    inflate,
    overlap_area,
    total_overlap,
    out_of_bounds,
    periphery_distances,
    bbox_area,
)
from .packer import PackedPlacement, pack, mirror
from .mutation import (
    Operator,
    MutationConfig,
    draw_mutation_sequence,
    apply_operator,
    mutate,
)

__all__ = [
    # Trees
    "NIL",
    "Corner",
    "TreeNode",
    "SlotRef",
    "PackingTree",
    "enumerate_slots",
    "attach_subtree",
    "detach_subtree",
    # Packing
    "Contour",
    "PackedPlacement",
    "pack",
    "mirror",
    # Geometry
    "Rect",
    "GEOM_TOL",
    "rects_intersect",
    "inflate",
    "overlap_area",
    "total_overlap",
    "out_of_bounds",
    "periphery_distances",
    "bbox_area",
    # Mutation
    "Operator",
    "MutationConfig",
    "draw_mutation_sequence",
    "apply_operator",
    "mutate",
]
