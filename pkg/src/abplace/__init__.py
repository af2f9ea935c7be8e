"""
ABPlace module for macroforge.

Angle-based analytical placement of unplaced macros on a shrinking ellipse.
"""

from .ellipse import (
    Ellipse,
    build_ellipse,
    ellipse_scale,
    default_gamma,
    project_macros,
    wrap_angles,
    TWO_PI,
)
from .objective import AnchorSet, build_anchors, objective, EPS
from .optimizer import OptimizerSettings, OptimizeResult, optimize

__all__ = [
    "Ellipse",
    "build_ellipse",
    "ellipse_scale",
    "default_gamma",
    "project_macros",
    "wrap_angles",
    "TWO_PI",
    "AnchorSet",
    "build_anchors",
    "objective",
    "EPS",
    "OptimizerSettings",
    "OptimizeResult",
    "optimize",
]
