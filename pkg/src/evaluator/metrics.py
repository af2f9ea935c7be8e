"""
Placement quality metrics.

HPWL is evaluated over the flattened pin arrays of a Design: one
reduceat per axis, no Python loop over nets.
"""

from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from src.errors import UnresolvedPinError
from src.netlist import Design
from src.packing.geometry import (  # noqa: F401
    overlap_area,
    total_overlap,
    out_of_bounds,
    periphery_distances,
)


# =============================================================================
# Wirelength
# =============================================================================

def pin_positions(
    design: Design,
    positions: np.ndarray,
    fallback: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Absolute (x, y) of every net pin; instance centers plus pin offsets."""
    inst = np.asarray(positions, dtype=float).reshape(-1, 2)
    if fallback is not None:
        inst = np.where(np.isnan(inst), np.asarray(fallback, dtype=float), inst)
    nodes = np.vstack([inst, design.port_positions])
    return nodes[design.pin_nodes] + design.pin_offsets


def net_hpwl(
    design: Design,
    positions: np.ndarray,
    fallback: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Half-perimeter of each net's pin bounding box."""
    if not design.nets:
        return np.zeros(0)
    pins = pin_positions(design, positions, fallback)
    bad = np.isnan(pins).any(axis=1)
    if bad.any():
        net = design.nets[int(design.pin_net[np.argmax(bad)])]
        raise UnresolvedPinError(net.name)
    starts = design.net_starts
    span_x = np.maximum.reduceat(pins[:, 0], starts) - np.minimum.reduceat(pins[:, 0], starts)
    span_y = np.maximum.reduceat(pins[:, 1], starts) - np.minimum.reduceat(pins[:, 1], starts)
    return span_x + span_y


def hpwl(
    design: Design,
    positions: np.ndarray,
    fallback: Optional[np.ndarray] = None,
) -> float:
    """
    Total half-perimeter wirelength.

    Args:
        positions: (N, 2) instance centers; NaN marks an unresolved instance.
        fallback: Optional (N, 2) centers used where positions is NaN
            (cluster centroids for cells during macro placement).
    """
    return float(net_hpwl(design, positions, fallback).sum())


# =============================================================================
# Metrics record
# =============================================================================

@dataclass
class Metrics:
    """Quality of one final placement. Runtime lives in the trace, not here."""
    hpwl: float
    total_overlap: float
    total_notch: float
    mean_periphery_dist: float
    io_overlap: float = 0.0
    out_of_bounds: int = 0
    random_baseline_hpwl: Optional[float] = None
    iterations: int = 0
    penalties: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)
