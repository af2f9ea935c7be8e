"""Metrics of a complete macro placement."""

from typing import Mapping, Optional

import numpy as np

from src.netlist import Design
from src.packing import Rect, inflate, out_of_bounds, periphery_distances, total_overlap
from src.relocator import IoRegions, notch_area
from .metrics import Metrics, hpwl


def placement_positions(
    design: Design,
    rects: Mapping[int, Rect],
    cell_positions: Optional[np.ndarray] = None,
) -> np.ndarray:
    """(N, 2) instance centers: macros from their rectangles, cells from cell_positions (NaN without)."""
    positions = np.full((len(design.instances), 2), np.nan)
    if cell_positions is not None:
        cells = list(design.cell_ids)
        positions[cells] = np.asarray(cell_positions, dtype=float)[cells]
    for m, (x, y, w, h) in rects.items():
        positions[m] = (x + w / 2.0, y + h / 2.0)
    return positions


def evaluate_placement(
    design: Design,
    rects: Mapping[int, Rect],
    cell_positions: Optional[np.ndarray] = None,
    io_regions: Optional[IoRegions] = None,
    notch_threshold: float = 0.0,
    halo: float = 0.0,
) -> Metrics:
    """
    Score a placement.

    Args:
        cell_positions: (N, 2) array whose cell rows hold the cell centers
            used for wirelength; typically cluster centroids of the final
            cell prototype.
        halo: Overlap is measured between halo-inflated macros.
    """
    ordered = [rects[m] for m in sorted(rects)]
    arr = np.asarray(ordered, dtype=float).reshape(-1, 4)
    W, H = design.outline.width, design.outline.height
    inflated = np.asarray([inflate(r, halo / 2.0) for r in ordered], dtype=float).reshape(-1, 4)
    obstacles = [b.rect for b in design.blockages]

    return Metrics(
        hpwl=hpwl(design, placement_positions(design, rects, cell_positions)),
        total_overlap=total_overlap(np.vstack([inflated, np.asarray(obstacles).reshape(-1, 4)])),
        total_notch=notch_area(ordered, design.outline, notch_threshold, obstacles=obstacles),
        mean_periphery_dist=float(periphery_distances(arr, W, H).mean()) if len(arr) else 0.0,
        io_overlap=io_regions.overlap(ordered) if io_regions is not None else 0.0,
        out_of_bounds=int(out_of_bounds(arr, W, H).sum()),
    )
