"""
Monotone first-order optimizer for the ABPlace objective.

Adam-normalized directions with a global step size that is halved until a
step improves the objective and grown after every success. Only improving
steps are accepted, so the recorded trace never increases.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.errors import NonFiniteObjectiveError
from src.observability import get_logger
from .ellipse import Ellipse, wrap_angles
from .objective import AnchorSet, objective

logger = get_logger("abplace")


@dataclass
class OptimizerSettings:
    max_iters: int = 500
    tol: float = 1e-6
    lr: float = 0.05
    max_lr: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    max_backtracks: int = 30


@dataclass
class OptimizeResult:
    theta: np.ndarray
    objective: float
    initial_objective: float
    iterations: int
    trace: list[float] = field(default_factory=list)


def _check_finite(iteration: int, value: float, grad: np.ndarray) -> None:
    if not np.isfinite(value):
        raise NonFiniteObjectiveError(iteration, value)
    if not np.all(np.isfinite(grad)):
        raise NonFiniteObjectiveError(iteration, value, "(gradient)")


def optimize(
    theta0: np.ndarray,
    anchors: AnchorSet,
    sizes: np.ndarray,
    ellipse: Ellipse,
    lam: float,
    settings: Optional[OptimizerSettings] = None,
) -> OptimizeResult:
    """Minimize the ABPlace objective over the angles; never increases it."""
    s = settings or OptimizerSettings()
    theta = wrap_angles(np.asarray(theta0, dtype=float).copy())
    value, grad = objective(theta, anchors, sizes, ellipse, lam)
    _check_finite(0, value, grad)
    initial = value
    trace = [value]

    if theta.size == 0 or not np.any(grad):
        return OptimizeResult(theta=theta, objective=value, initial_objective=initial, iterations=0, trace=trace)

    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    lr = s.lr
    iteration = 0
    for iteration in range(1, s.max_iters + 1):
        m = s.beta1 * m + (1 - s.beta1) * grad
        v = s.beta2 * v + (1 - s.beta2) * grad * grad
        m_hat = m / (1 - s.beta1 ** iteration)
        v_hat = v / (1 - s.beta2 ** iteration)
        adam_dir = m_hat / (np.sqrt(v_hat) + 1e-12)
        plain_dir = grad / np.max(np.abs(grad))

        accepted = False
        for direction in (adam_dir, plain_dir):
            step = lr
            for _ in range(s.max_backtracks):
                candidate = wrap_angles(theta - step * direction)
                cand_value, cand_grad = objective(candidate, anchors, sizes, ellipse, lam)
                _check_finite(iteration, cand_value, cand_grad)
                if cand_value < value:
                    accepted = True
                    break
                step *= 0.5
            if accepted:
                break
        if not accepted:
            break

        rel_change = (value - cand_value) / max(abs(value), 1e-12)
        theta, value, grad = candidate, cand_value, cand_grad
        trace.append(value)
        lr = min(step * 1.5, s.max_lr)
        if rel_change < s.tol or not np.any(grad):
            break

    logger.debug(f"ABPlace: objective {initial:.6g} -> {value:.6g} in {iteration} iterations")
    return OptimizeResult(
        theta=theta,
        objective=value,
        initial_objective=initial,
        iterations=len(trace) - 1,
        trace=trace,
    )
