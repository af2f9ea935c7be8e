"""Random legal placements as a wirelength reference."""

from typing import Optional

import numpy as np

from src.errors import DesignError
from src.netlist import Design
from src.packing import Rect, rects_intersect
from .metrics import hpwl
from .placement import placement_positions

DEFAULT_BASELINE_SAMPLES = 20
MAX_TRIES_PER_MACRO = 10_000


def random_legal_placement(
    design: Design,
    rng: np.random.Generator,
    max_tries: int = MAX_TRIES_PER_MACRO,
) -> dict[int, Rect]:
    """
    Drop movable macros uniformly at random without overlap, largest first.

    Pre-placed macros keep their positions and blockages are avoided.
    """
    W, H = design.outline.width, design.outline.height
    rects: dict[int, Rect] = {}
    taken: list[Rect] = [b.rect for b in design.blockages]
    for m in design.preplaced_ids:
        inst = design.instances[m]
        rects[m] = (inst.fixed_at[0], inst.fixed_at[1], inst.width, inst.height)
        taken.append(rects[m])

    movable = [m for m in design.macro_ids if m not in rects]
    movable.sort(key=lambda m: (-design.instances[m].area, m))
    for m in movable:
        inst = design.instances[m]
        for _ in range(max_tries):
            x = rng.uniform(0.0, W - inst.width)
            y = rng.uniform(0.0, H - inst.height)
            rect = (float(x), float(y), inst.width, inst.height)
            if not any(rects_intersect(rect, other) for other in taken):
                break
        else:
            raise DesignError(
                f"no random legal position for '{inst.name}' after {max_tries} draws"
            )
        rects[m] = rect
        taken.append(rect)
    return rects


def baseline_hpwl(
    design: Design,
    cell_positions: Optional[np.ndarray] = None,
    n: int = DEFAULT_BASELINE_SAMPLES,
    seed: int = 0,
) -> float:
    """Mean HPWL over n random legal macro placements with cells held where given."""
    rng = np.random.default_rng(seed)
    values = [
        hpwl(design, placement_positions(design, random_legal_placement(design, rng), cell_positions))
        for _ in range(n)
    ]
    return float(np.mean(values))
