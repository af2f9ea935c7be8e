"""
Evaluator module for macroforge.

Wirelength and geometry metrics, random baselines, SVG rendering and
runtime breakdowns.
"""

from .metrics import (
    Metrics,
    pin_positions,
    net_hpwl,
    hpwl,
    overlap_area,
    total_overlap,
    out_of_bounds,
    periphery_distances,
)
from .placement import placement_positions, evaluate_placement
from .baseline import random_legal_placement, baseline_hpwl, DEFAULT_BASELINE_SAMPLES
from .render import render_svg, group_color
from .timings import stage_timings, STAGES

__all__ = [
    # Metrics
    "Metrics",
    "pin_positions",
    "net_hpwl",
    "hpwl",
    "overlap_area",
    "total_overlap",
    "out_of_bounds",
    "periphery_distances",
    "placement_positions",
    "evaluate_placement",
    # Baseline
    "random_legal_placement",
    "baseline_hpwl",
    "DEFAULT_BASELINE_SAMPLES",
    # Artifacts
    "render_svg",
    "group_color",
    "stage_timings",
    "STAGES",
]
