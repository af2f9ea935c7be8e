"""Axis-aligned rectangle helpers on (x, y, w, h) tuples and (n, 4) arrays."""

from typing import Sequence

import numpy as np

Rect = tuple[float, float, float, float]

GEOM_TOL = 1e-9


def rects_intersect(a: Rect, b: Rect, tol: float = GEOM_TOL) -> bool:
    dx = min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0])
    dy = min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1])
    return dx > tol and dy > tol


def inflate(rect: Rect, halo: float) -> Rect:
    x, y, w, h = rect
    return (x - halo, y - halo, w + 2 * halo, h + 2 * halo)


def overlap_area(a: Sequence[float], b: Sequence[float]) -> float:
    """Intersection area of two rectangles."""
    dx = min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0])
    dy = min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1])
    return max(dx, 0.0) * max(dy, 0.0)


def total_overlap(rects: np.ndarray) -> float:
    """Sum of pairwise intersection areas."""
    rects = np.asarray(rects, dtype=float).reshape(-1, 4)
    if len(rects) < 2:
        return 0.0
    x0, y0 = rects[:, 0], rects[:, 1]
    x1, y1 = x0 + rects[:, 2], y0 + rects[:, 3]
    dx = np.minimum(x1[:, None], x1[None, :]) - np.maximum(x0[:, None], x0[None, :])
    dy = np.minimum(y1[:, None], y1[None, :]) - np.maximum(y0[:, None], y0[None, :])
    pairwise = np.clip(dx, 0, None) * np.clip(dy, 0, None)
    return float(np.triu(pairwise, k=1).sum())


def out_of_bounds(rects: np.ndarray, width: float, height: float, tol: float = GEOM_TOL) -> np.ndarray:
    rects = np.asarray(rects, dtype=float).reshape(-1, 4)
    return (
        (rects[:, 0] < -tol)
        | (rects[:, 1] < -tol)
        | (rects[:, 0] + rects[:, 2] > width + tol)
        | (rects[:, 1] + rects[:, 3] > height + tol)
    )


def periphery_distances(rects: np.ndarray, width: float, height: float) -> np.ndarray:
    """Per-rectangle minimum distance from any edge to the die boundary."""
    rects = np.asarray(rects, dtype=float).reshape(-1, 4)
    return np.min(
        np.stack([
            rects[:, 0],
            rects[:, 1],
            width - (rects[:, 0] + rects[:, 2]),
            height - (rects[:, 1] + rects[:, 3]),
        ]),
        axis=0,
    ).clip(min=0.0)


def bbox_area(rects: Sequence[Rect]) -> float:
    if len(rects) == 0:
        return 0.0
    arr = np.asarray(rects, dtype=float).reshape(-1, 4)
    width = (arr[:, 0] + arr[:, 2]).max() - arr[:, 0].min()
    height = (arr[:, 1] + arr[:, 3]).max() - arr[:, 1].min()
    return float(width * height)
