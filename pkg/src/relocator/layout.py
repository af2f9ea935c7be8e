"""Fixed macros and the four corner trees shared by successive relocate calls."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.netlist import ChipOutline, Design
from src.packing import Corner, PackedPlacement, PackingTree, Rect


@dataclass
class CornerLayout:
    """
    Everything already fixed on the die.

    placed holds chip-coordinate rectangles of every fixed macro by instance
    id: pre-placed macros plus everything committed into a corner tree.
    """
    outline: ChipOutline
    sizes: np.ndarray
    trees: dict[Corner, PackingTree] = field(default_factory=lambda: {c: PackingTree(c) for c in Corner})
    placed: dict[int, Rect] = field(default_factory=dict)
    blockages: tuple[Rect, ...] = ()
    halo: float = 0.0

    @classmethod
    def from_design(cls, design: Design, halo: float = 0.0) -> CornerLayout:
        layout = cls(
            outline=design.outline,
            sizes=design.sizes,
            blockages=tuple(b.rect for b in design.blockages),
            halo=halo,
        )
        for m in design.preplaced_ids:
            inst = design.instances[m]
            x, y = inst.fixed_at
            layout.placed[m] = (float(x), float(y), inst.width, inst.height)
        return layout

    def copy(self) -> CornerLayout:
        return CornerLayout(
            outline=self.outline,
            sizes=self.sizes,
            trees={c: t.copy() for c, t in self.trees.items()},
            placed=dict(self.placed),
            blockages=self.blockages,
            halo=self.halo,
        )

    def corner_rects(self, corner: Corner) -> dict[int, Rect]:
        return {m: self.placed[m] for m in self.trees[corner].macro_ids}

    def obstacles_for(self, corner: Corner) -> list[Rect]:
        """Fixed rectangles outside a corner's tree, blockages included."""
        own = set(self.trees[corner].macro_ids)
        return [r for m, r in self.placed.items() if m not in own] + list(self.blockages)

    def corner_util(self) -> list[float]:
        return [
            float(sum(self.sizes[m, 0] * self.sizes[m, 1] for m in self.trees[c].macro_ids))
            for c in Corner
        ]

    def commit(self, tree: PackingTree, packed: PackedPlacement) -> list[int]:
        """Adopt a legal packing of one corner; returns the newly fixed macro ids."""
        new = [m for m in packed.rects if m not in self.placed]
        self.trees[tree.corner] = tree
        self.placed.update(packed.rects)
        return new

    def centers(self) -> dict[int, tuple[float, float]]:
        return {m: (x + w / 2.0, y + h / 2.0) for m, (x, y, w, h) in self.placed.items()}
