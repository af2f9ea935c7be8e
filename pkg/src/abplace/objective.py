"""
ABPlace objective over the angles of unplaced macros.

value = sum_i sum_anchor W[i, a] * d(i, a)
      + sum_{i != j} U[i, j] * d(i, j)              (ordered pairs)
      + lam * sum_{i < j} ox(i, j) * oy(i, j)

with d the smoothed distance sqrt(dist^2 + eps^2) and
ox = max((w_i + w_j)/2 - sabs(x_i - x_j), 0), sabs(t) = sqrt(t^2 + eps^2) - eps.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from src.connectivity import ConnectionMatrix
from .ellipse import Ellipse

EPS = 1e-6


@dataclass(frozen=True)
class AnchorSet:
    """
    Fixed anchors for one ABPlace run.

    positions: (m, 2) placed-macro centers and cluster centroids.
    weights: (n, m) connection of each unplaced macro to each anchor.
    mutual: (n, n) symmetric connection among unplaced macros.
    """
    positions: np.ndarray
    weights: np.ndarray
    mutual: np.ndarray

    @property
    def n_unplaced(self) -> int:
        return self.weights.shape[0]


def build_anchors(
    matrix: ConnectionMatrix,
    unplaced: Sequence[int],
    placed_centers: Mapping[int, tuple[float, float]],
    centroids: np.ndarray,
) -> AnchorSet:
    """
    Slice the connection matrix for a set of unplaced macro ids.

    unplaced and the placed_centers keys are macro entity indices
    (positions in design.macro_ids); cluster c is entity n_macros + c.
    """
    unplaced = list(unplaced)
    placed = sorted(placed_centers)
    anchor_entities = placed + [matrix.cluster_entity(c) for c in range(len(centroids))]
    positions = np.array(
        [placed_centers[m] for m in placed] + [tuple(c) for c in np.asarray(centroids).reshape(-1, 2)],
        dtype=float,
    ).reshape(-1, 2)
    weights = matrix.A[np.ix_(unplaced, anchor_entities)] if anchor_entities else np.zeros((len(unplaced), 0))
    mutual = matrix.A[np.ix_(unplaced, unplaced)].copy()
    np.fill_diagonal(mutual, 0.0)
    return AnchorSet(positions=positions, weights=weights, mutual=mutual)


def _smooth_abs(t: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    root = np.sqrt(t * t + eps * eps)
    return root - eps, t / root


def objective(
    theta: np.ndarray,
    anchors: AnchorSet,
    sizes: np.ndarray,
    ellipse: Ellipse,
    lam: float,
    eps: float = EPS,
) -> tuple[float, np.ndarray]:
    """
    Objective value and analytic gradient with respect to theta.

    Args:
        theta: (n,) angles of the unplaced macros.
        sizes: (n, 2) widths and heights of the same macros.
    """
    theta = np.asarray(theta, dtype=float)
    sizes = np.asarray(sizes, dtype=float).reshape(-1, 2)
    n = theta.shape[0]
    pos = ellipse.points(theta)
    grad_pos = np.zeros((n, 2))
    value = 0.0

    # anchors
    if anchors.weights.size:
        diff = pos[:, None, :] - anchors.positions[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2) + eps * eps)
        value += float(np.sum(anchors.weights * dist))
        grad_pos += np.sum((anchors.weights / dist)[:, :, None] * diff, axis=1)

    if n > 1:
        # unplaced-unplaced connections, ordered pairs
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2) + eps * eps)
        mutual = anchors.mutual.copy()
        np.fill_diagonal(mutual, 0.0)
        value += float(np.sum(mutual * dist))
        grad_pos += 2.0 * np.sum((mutual / dist)[:, :, None] * diff, axis=1)

        # overlap, unordered pairs
        if lam > 0:
            sx, dsx = _smooth_abs(diff[:, :, 0], eps)
            sy, dsy = _smooth_abs(diff[:, :, 1], eps)
            reach_x = (sizes[:, None, 0] + sizes[None, :, 0]) / 2.0
            reach_y = (sizes[:, None, 1] + sizes[None, :, 1]) / 2.0
            ox_raw = reach_x - sx
            oy_raw = reach_y - sy
            ox = np.clip(ox_raw, 0.0, None)
            oy = np.clip(oy_raw, 0.0, None)
            off_diag = ~np.eye(n, dtype=bool)
            area = ox * oy * off_diag
            value += lam * float(np.triu(area, k=1).sum())
            gx = -(ox_raw > 0).astype(float) * dsx * oy * off_diag
            gy = -(oy_raw > 0).astype(float) * dsy * ox * off_diag
            grad_pos[:, 0] += lam * gx.sum(axis=1)
            grad_pos[:, 1] += lam * gy.sum(axis=1)

    grad = np.sum(grad_pos * ellipse.tangents(theta), axis=1)
    return value, grad
