"""
Relocator module for macroforge.

Preference-driven assignment of macro groups to corner packing trees.
"""

from .io_regions import (
    IoRegions,
    build_io_regions,
    port_keepout,
    quadrant,
    corner_point,
    DEFAULT_IO_DEPTH_FRACTION,
    DEFAULT_IO_WIDTH_FRACTION,
)
from .preference import (
    CORNERS,
    CostWeights,
    PreferenceMatrix,
    compute_preference,
    gravity_center,
)
from .notch import notch_area, default_notch_threshold
from .layout import CornerLayout
from .cost import (
    PENALTY_NAMES,
    RelocationContext,
    PenaltyNormalizer,
    penalty_vector,
    evaluate_cost,
)
from .assignment import Candidate, CandidateEvaluator, TrialResult, try_assignment
from .search import corner_packing_search, tournament_select, generation_count
from .relocate import (
    RelocateSettings,
    RelocateResult,
    Assignment,
    relocate,
    min_macros_per_round,
    split_group,
)

__all__ = [
    # I/O regions
    "IoRegions",
    "build_io_regions",
    "port_keepout",
    "quadrant",
    "corner_point",
    "DEFAULT_IO_DEPTH_FRACTION",
    "DEFAULT_IO_WIDTH_FRACTION",
    # Preference
    "CORNERS",
    "CostWeights",
    "PreferenceMatrix",
    "compute_preference",
    "gravity_center",
    # Cost
    "notch_area",
    "default_notch_threshold",
    "CornerLayout",
    "PENALTY_NAMES",
    "RelocationContext",
    "PenaltyNormalizer",
    "penalty_vector",
    "evaluate_cost",
    # Search
    "Candidate",
    "CandidateEvaluator",
    "TrialResult",
    "try_assignment",
    "corner_packing_search",
    "tournament_select",
    "generation_count",
    # Relocating
    "RelocateSettings",
    "RelocateResult",
    "Assignment",
    "relocate",
    "min_macros_per_round",
    "split_group",
]
