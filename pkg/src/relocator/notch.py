"""
Notch area: free space too narrow for useful cell placement.

Free space is rasterized on the irregular grid induced by every macro edge
and the die boundary. A free cell is a notch when its maximal horizontal
free run is narrower than the threshold, or its maximal vertical free run
is shorter than it.
"""

from typing import Optional, Sequence

import numpy as np
from scipy import ndimage

from src.netlist import ChipOutline, Design
from src.packing import Rect

# run connectivity along axis 0 (x) and axis 1 (y) of the (nx, ny) raster
_ALONG_X = np.array([[0, 1, 0], [0, 1, 0], [0, 1, 0]])
_ALONG_Y = np.array([[0, 0, 0], [1, 1, 1], [0, 0, 0]])


def default_notch_threshold(design: Design) -> float:
    """Twice the mean standard-cell height, or 2% of the shorter die side without cells."""
    heights = [design.instances[i].height for i in design.cell_ids if design.instances[i].height > 0]
    if heights:
        return 2.0 * float(np.mean(heights))
    return 0.02 * min(design.outline.width, design.outline.height)


def _edges(lo: np.ndarray, hi: np.ndarray, limit: float) -> np.ndarray:
    values = np.concatenate([[0.0, limit], np.clip(lo, 0, limit), np.clip(hi, 0, limit)])
    return np.unique(values)


def occupancy(rects: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """(nx, ny) boolean raster of the cells covered by any rectangle."""
    occ = np.zeros((len(xs) - 1, len(ys) - 1), dtype=bool)
    x0 = np.searchsorted(xs, np.clip(rects[:, 0], xs[0], xs[-1]))
    x1 = np.searchsorted(xs, np.clip(rects[:, 0] + rects[:, 2], xs[0], xs[-1]))
    y0 = np.searchsorted(ys, np.clip(rects[:, 1], ys[0], ys[-1]))
    y1 = np.searchsorted(ys, np.clip(rects[:, 1] + rects[:, 3], ys[0], ys[-1]))
    for i0, i1, j0, j1 in zip(x0, x1, y0, y1):
        occ[i0:i1, j0:j1] = True
    return occ


def _run_lengths(free: np.ndarray, steps: np.ndarray, structure: np.ndarray) -> np.ndarray:
    """Length of the free run through each cell along one axis; 0 on occupied cells."""
    labels, count = ndimage.label(free, structure=structure)
    if count == 0:
        return np.zeros(free.shape)
    lengths = ndimage.sum(steps, labels, index=np.arange(1, count + 1))
    out = np.zeros(free.shape)
    out[free] = np.asarray(lengths)[labels[free] - 1]
    return out


def notch_area(
    rects: Sequence[Rect],
    outline: ChipOutline,
    notch_threshold: float,
    obstacles: Optional[Sequence[Rect]] = None,
) -> float:
    """Total area of free cells that belong to a notch."""
    all_rects = np.array(list(rects) + list(obstacles or ()), dtype=float).reshape(-1, 4)
    if len(all_rects) == 0 or notch_threshold <= 0:
        return 0.0
    xs = _edges(all_rects[:, 0], all_rects[:, 0] + all_rects[:, 2], outline.width)
    ys = _edges(all_rects[:, 1], all_rects[:, 1] + all_rects[:, 3], outline.height)
    dx, dy = np.diff(xs), np.diff(ys)

    free = ~occupancy(all_rects, xs, ys)
    run_x = _run_lengths(free, np.broadcast_to(dx[:, None], free.shape), _ALONG_X)
    run_y = _run_lengths(free, np.broadcast_to(dy[None, :], free.shape), _ALONG_Y)

    notch = free & ((run_x < notch_threshold) | (run_y < notch_threshold))
    cell_area = dx[:, None] * dy[None, :]
    return float(cell_area[notch].sum())
