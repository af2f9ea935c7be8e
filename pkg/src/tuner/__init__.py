"""
Tuner module for macroforge.

Gaussian-process expected-improvement search over lambda and w1..w7.
"""

from .gp import SquaredExp, GaussianProcess, expected_improvement
from .bayes import (
    TuneSpec,
    TuneResult,
    Evaluation,
    tune,
    proxy_objective,
    ratio,
    params_to_config,
    config_to_params,
    PARAM_NAMES,
    N_PARAMS,
)

__all__ = [
    # Surrogate
    "SquaredExp",
    "GaussianProcess",
    "expected_improvement",
    # Search
    "TuneSpec",
    "TuneResult",
    "Evaluation",
    "tune",
    "proxy_objective",
    "ratio",
    "params_to_config",
    "config_to_params",
    "PARAM_NAMES",
    "N_PARAMS",
]
