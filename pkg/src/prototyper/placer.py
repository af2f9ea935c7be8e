"""
Internal mixed-size analytical prototyper.

Quadratic clique wirelength plus a bin-overflow spreading term, minimized by
Jacobi-preconditioned gradient descent. Fixed macros and blockages are
density obstacles; movable macro density is scaled by the target density so
a lone macro never overflows its own bins.
"""

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np
from scipy.ndimage import gaussian_filter, map_coordinates

from src.connectivity import clique_pairs
from src.errors import DivergenceError
from src.evaluator.metrics import hpwl
from src.netlist import Design
from src.observability import get_logger
from .density import DensitySchedule, Prototype

logger = get_logger("prototyper")


@dataclass(frozen=True)
class PrototypeSettings:
    bins: int = 128
    max_iters: int = 500
    tol: float = 1e-5
    max_increases: int = 50
    target_overflow: float = 0.1
    jitter: float = 0.01
    min_step: float = 1e-4
    penalty_growth: float = 1.05
    net_degree_cap: int = 64


# =============================================================================
# Density model
# =============================================================================

class BinGrid:
    """Square bin grid over the outline with exact rectangle/bin overlap."""

    def __init__(self, width: float, height: float, bins: int):
        self.nx = self.ny = max(2, int(bins))
        self.bw = width / self.nx
        self.bh = height / self.ny
        self.x_edges = np.linspace(0.0, width, self.nx + 1)
        self.y_edges = np.linspace(0.0, height, self.ny + 1)

    @property
    def bin_area(self) -> float:
        return self.bw * self.bh

    @staticmethod
    def _span_overlap(lo: np.ndarray, hi: np.ndarray, edges: np.ndarray) -> np.ndarray:
        left = np.maximum(lo[:, None], edges[None, :-1])
        right = np.minimum(hi[:, None], edges[None, 1:])
        return np.clip(right - left, 0.0, None)

    def utilization(self, centers: np.ndarray, sizes: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """(nx, ny) covered fraction of each bin."""
        if len(centers) == 0:
            return np.zeros((self.nx, self.ny))
        half = sizes / 2.0
        ox = self._span_overlap(centers[:, 0] - half[:, 0], centers[:, 0] + half[:, 0], self.x_edges)
        oy = self._span_overlap(centers[:, 1] - half[:, 1], centers[:, 1] + half[:, 1], self.y_edges)
        return (ox * weights[:, None]).T @ oy / self.bin_area

    def bin_coordinates(self, centers: np.ndarray) -> np.ndarray:
        """Fractional bin-center coordinates, shape (2, n), for interpolation."""
        return np.vstack([centers[:, 0] / self.bw - 0.5, centers[:, 1] / self.bh - 0.5])


# =============================================================================
# Placer
# =============================================================================

class AnalyticalPrototyper:
    """
    One prototype round for a fixed set of placed macros.

    Usage:
        placer = AnalyticalPrototyper(design, fixed={0: (12.0, 8.0)})
        proto = placer.run(target_density=0.92, seed=1)
    """

    def __init__(
        self,
        design: Design,
        fixed: Optional[Mapping[int, tuple[float, float]]] = None,
        settings: Optional[PrototypeSettings] = None,
    ):
        self.design = design
        self.settings = settings or PrototypeSettings()
        self.fixed = dict(fixed or {})
        for mid in design.preplaced_ids:
            inst = design.instances[mid]
            self.fixed.setdefault(mid, (inst.fixed_at[0] + inst.width / 2, inst.fixed_at[1] + inst.height / 2))
        n = len(design.instances)
        self.n = n
        self.movable = np.array([i for i in range(n) if i not in self.fixed], dtype=np.int64)
        self.sizes = design.sizes
        self.grid = BinGrid(design.outline.width, design.outline.height, self.settings.bins)

        u, v, w = clique_pairs(design, self.settings.net_degree_cap)
        keep = u != v
        self.u, self.v, self.w = u[keep], v[keep], w[keep]

        n_nodes = n + len(design.ports)
        degree = np.zeros(n_nodes)
        np.add.at(degree, self.u, self.w)
        np.add.at(degree, self.v, self.w)
        self.wire_precond = 2.0 * degree[:n]

        self.obstacles = self._obstacle_map()
        is_macro = np.array([inst.is_macro for inst in design.instances], dtype=bool)
        self.is_macro = is_macro
        self.areas = self.sizes[:, 0] * self.sizes[:, 1]

    def _obstacle_map(self) -> np.ndarray:
        rects = []
        for mid, (cx, cy) in self.fixed.items():
            w, h = self.sizes[mid]
            rects.append((cx, cy, w, h))
        for blk in self.design.blockages:
            rects.append((blk.x + blk.width / 2, blk.y + blk.height / 2, blk.width, blk.height))
        if not rects:
            return np.zeros((self.grid.nx, self.grid.ny))
        arr = np.array(rects, dtype=float)
        util = self.grid.utilization(arr[:, :2], arr[:, 2:], np.ones(len(arr)))
        return np.clip(util, 0.0, 1.0)

    # -------------------------------------------------------------------------
    # Objective pieces
    # -------------------------------------------------------------------------

    def _nodes(self, inst: np.ndarray) -> np.ndarray:
        return np.vstack([inst, self.design.port_positions])

    def _wirelength(self, inst: np.ndarray) -> tuple[float, np.ndarray]:
        nodes = self._nodes(inst)
        diff = nodes[self.u] - nodes[self.v]
        value = float(np.sum(self.w * np.sum(diff * diff, axis=1)))
        contrib = 2.0 * self.w[:, None] * diff
        size = len(nodes)
        grad = np.stack([
            np.bincount(self.u, contrib[:, d], size) - np.bincount(self.v, contrib[:, d], size)
            for d in (0, 1)
        ], axis=1)
        return value, grad[: self.n]

    def _overflow_map(self, inst: np.ndarray, td: float) -> np.ndarray:
        mov = self.movable
        weights = np.where(self.is_macro[mov], td, 1.0)
        util = self.grid.utilization(inst[mov], self.sizes[mov], weights)
        capacity = np.clip(td - self.obstacles, 0.0, None)
        return np.clip(util - capacity, 0.0, None)

    def _density(self, inst: np.ndarray, td: float) -> tuple[float, np.ndarray, float]:
        over = self._overflow_map(inst, td)
        value = float(np.sum(over * over) * self.grid.bin_area)
        potential = gaussian_filter(over, sigma=1.0, mode="constant")
        gx, gy = np.gradient(potential, self.grid.bw, self.grid.bh)
        grad = np.zeros((self.n, 2))
        mov = self.movable
        coords = self.grid.bin_coordinates(inst[mov])
        grad[mov, 0] = self.areas[mov] * map_coordinates(gx, coords, order=1, mode="nearest")
        grad[mov, 1] = self.areas[mov] * map_coordinates(gy, coords, order=1, mode="nearest")
        movable_area = float(self.areas[mov].sum())
        overflow_ratio = float(over.sum() * self.grid.bin_area / movable_area) if movable_area > 0 else 0.0
        return value, grad, overflow_ratio

    def _initial_penalty(self, g_wl: np.ndarray, g_den: np.ndarray) -> float:
        mov = self.movable
        norm_wl = np.abs(g_wl[mov]).sum()
        norm_den = np.abs(g_den[mov]).sum()
        if norm_wl > 0 and norm_den > 0:
            return 0.1 * norm_wl / norm_den
        mean_area = max(float(self.areas[mov].mean()), 1e-12)
        return 1e-3 * max(float(self.wire_precond[mov].mean()), 1.0) / mean_area

    def _clamp(self, inst: np.ndarray) -> np.ndarray:
        W, H = self.design.outline.width, self.design.outline.height
        half = np.minimum(self.sizes / 2.0, [W / 2.0, H / 2.0])
        lo = half
        hi = np.array([W, H]) - half
        return np.clip(inst, lo, hi)

    # -------------------------------------------------------------------------
    # Driver
    # -------------------------------------------------------------------------

    def initial_positions(self, seed: int) -> np.ndarray:
        outline = self.design.outline
        rng = np.random.default_rng(seed)
        jitter = self.settings.jitter * min(outline.width, outline.height)
        inst = np.tile(np.array(outline.center, dtype=float), (self.n, 1))
        inst += rng.uniform(-jitter, jitter, size=(self.n, 2))
        for mid, center in self.fixed.items():
            inst[mid] = center
        return self._clamp_movable(inst)

    def _clamp_movable(self, inst: np.ndarray) -> np.ndarray:
        out = inst.copy()
        if len(self.movable):
            out[self.movable] = self._clamp(inst)[self.movable]
        return out

    def run(self, target_density: float, seed: int) -> Prototype:
        inst = self.initial_positions(seed)
        if len(self.movable) == 0:
            return Prototype(
                positions=inst,
                hpwl=hpwl(self.design, inst),
                density_used=target_density,
                iterations=0,
            )

        s = self.settings
        mov = self.movable
        wl, g_wl = self._wirelength(inst)
        den, g_den, overflow = self._density(inst, target_density)
        mu = self._initial_penalty(g_wl, g_den)
        lr = 1.0
        increases = 0
        iteration = 0

        for iteration in range(1, s.max_iters + 1):
            objective = wl + mu * den
            precond = np.maximum(self.wire_precond + mu * self.areas, 1e-12)[:, None]
            step = np.zeros_like(inst)
            step[mov] = (g_wl[mov] + mu * g_den[mov]) / precond[mov]
            candidate = self._clamp_movable(inst - lr * step)

            new_wl, new_g_wl = self._wirelength(candidate)
            new_den, new_g_den, overflow = self._density(candidate, target_density)
            new_objective = new_wl + mu * new_den

            if not np.isfinite(new_objective):
                raise DivergenceError(iteration, new_objective)
            rel_change = abs(new_objective - objective) / max(abs(objective), 1e-12)
            # rises below tol do not count as increases
            if new_objective > objective and rel_change >= s.tol:
                increases += 1
                lr = max(lr * 0.5, s.min_step)
                if increases >= s.max_increases:
                    raise DivergenceError(iteration, new_objective)
            else:
                increases = 0
                lr = min(lr * 1.1, 1.0)

            inst, wl, g_wl, den, g_den = candidate, new_wl, new_g_wl, new_den, new_g_den
            if rel_change < s.tol and overflow <= s.target_overflow:
                break
            if overflow > s.target_overflow:
                mu *= s.penalty_growth

        result = hpwl(self.design, inst)
        logger.debug(
            f"Prototype converged after {iteration} iterations: hpwl={result:.4g}, "
            f"overflow={overflow:.3f}, td={target_density:.3f}"
        )
        return Prototype(
            positions=inst,
            hpwl=result,
            density_used=target_density,
            iterations=iteration,
        )


def run_prototype(
    design: Design,
    fixed: Optional[Mapping[int, tuple[float, float]]],
    schedule: DensitySchedule,
    k: int,
    seed: int,
    settings: Optional[PrototypeSettings] = None,
) -> Prototype:
    """Mixed-size prototype at outer iteration k with target density schedule.target(k)."""
    placer = AnalyticalPrototyper(design, fixed, settings)
    return placer.run(schedule.target(k), seed)
