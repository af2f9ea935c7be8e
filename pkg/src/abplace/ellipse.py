"""
Shrinking placement ellipse and angle projection.

Unplaced macros live on the ellipse boundary, parameterized by one angle
each: (cx + a*cos(theta), cy + b*sin(theta)).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.netlist import ChipOutline

TWO_PI = 2.0 * math.pi
SCHEDULE_STEPS = 10
_SNAP = 1e-12


def default_gamma(beta_init: float, beta_finish: float, steps: int = SCHEDULE_STEPS) -> float:
    return (beta_finish / beta_init) ** (1.0 / steps)


def ellipse_scale(beta_init: float, beta_finish: float, gamma: float, k: int) -> float:
    """beta_init * gamma^(k-1), floored at beta_finish."""
    if k < 1:
        raise ValueError(f"iterations start at 1, got {k}")
    scale = beta_init * gamma ** (k - 1)
    if scale < beta_finish + _SNAP:
        return beta_finish
    return scale


@dataclass(frozen=True)
class Ellipse:
    a: float
    b: float
    cx: float
    cy: float
    scale: float
    k: int = 1

    @property
    def center(self) -> tuple[float, float]:
        return (self.cx, self.cy)

    def points(self, theta: np.ndarray) -> np.ndarray:
        """(n, 2) boundary points for the given angles."""
        theta = np.asarray(theta, dtype=float)
        return np.column_stack([self.cx + self.a * np.cos(theta), self.cy + self.b * np.sin(theta)])

    def tangents(self, theta: np.ndarray) -> np.ndarray:
        """d(point)/d(theta), shape (n, 2)."""
        theta = np.asarray(theta, dtype=float)
        return np.column_stack([-self.a * np.sin(theta), self.b * np.cos(theta)])


def build_ellipse(
    outline: ChipOutline,
    beta_init: float = 0.9,
    beta_finish: float = 0.5,
    gamma: Optional[float] = None,
    k: int = 1,
) -> Ellipse:
    if not (0 < beta_finish <= beta_init < 1):
        raise ValueError(f"need 0 < beta_finish <= beta_init < 1, got {beta_finish}, {beta_init}")
    if gamma is None:
        gamma = default_gamma(beta_init, beta_finish)
    if not (0 < gamma <= 1):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    scale = ellipse_scale(beta_init, beta_finish, gamma, k)
    cx, cy = outline.center
    return Ellipse(
        a=scale * outline.width / 2.0,
        b=scale * outline.height / 2.0,
        cx=cx,
        cy=cy,
        scale=scale,
        k=k,
    )


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    wrapped = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can round up to exactly 2*pi for tiny negative inputs
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def project_macros(
    positions: np.ndarray,
    ellipse: Ellipse,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    Angle of each center as seen from the ellipse center.

    A center exactly at the ellipse center gets a uniform random angle.
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    dx = positions[:, 0] - ellipse.cx
    dy = positions[:, 1] - ellipse.cy
    theta = np.arctan2(dy, dx)
    degenerate = (dx == 0) & (dy == 0)
    if degenerate.any():
        rng = rng if rng is not None else np.random.default_rng(0)
        theta[degenerate] = rng.uniform(0.0, TWO_PI, size=int(degenerate.sum()))
    return wrap_angles(theta)
