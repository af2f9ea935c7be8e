"""
Prototyper module for macroforge.

Mixed-size prototypes (internal analytical placer or injected file) and the
adaptive target-density schedule.
"""

from .density import DensitySchedule, Prototype, cluster_centroids
from .placer import (
    AnalyticalPrototyper,
    PrototypeSettings,
    BinGrid,
    run_prototype,
)
from .injection import inject_prototype

__all__ = [
    "DensitySchedule",
    "Prototype",
    "cluster_centroids",
    "AnalyticalPrototyper",
    "PrototypeSettings",
    "BinGrid",
    "run_prototype",
    "inject_prototype",
]
