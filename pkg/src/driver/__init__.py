"""
Driver module for macroforge.

Configuration, run state and the outer prototype / ABPlace / relocate loop.
"""

from .config import PipelineConfig, load_config
from .state import Analysis, IterationRecord, RunState
from .pipeline import (
    FinalPlacement,
    analyze,
    initial_state,
    step,
    run_pipeline,
    final_cell_positions,
    stage_rng,
    stage_int_seed,
)
from .outputs import (
    write_outputs,
    load_placement,
    dumps_placement,
    dumps_metrics,
    placement_to_model,
    PLACEMENT_FILE,
    METRICS_FILE,
    LAYOUT_FILE,
)

__all__ = [
    # Configuration
    "PipelineConfig",
    "load_config",
    # State
    "Analysis",
    "IterationRecord",
    "RunState",
    # Pipeline
    "FinalPlacement",
    "analyze",
    "initial_state",
    "step",
    "run_pipeline",
    "final_cell_positions",
    "stage_rng",
    "stage_int_seed",
    # Files
    "write_outputs",
    "load_placement",
    "dumps_placement",
    "dumps_metrics",
    "placement_to_model",
    "PLACEMENT_FILE",
    "METRICS_FILE",
    "LAYOUT_FILE",
]
