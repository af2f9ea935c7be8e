"""
Bayesian tuning of the ABPlace overlap weight and the seven relocating weights.

The search space is the open unit cube in eight dimensions:
abplace_lambda = u[0] and w_t = 2 * u[t]. The base configuration is always
evaluated first, so the best result can never be worse than it.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import qmc

from src.driver import PipelineConfig, run_pipeline
from src.errors import MacroForgeError, PipelineError
from src.evaluator import Metrics
from src.netlist import Design
from src.observability import get_logger
from .gp import GaussianProcess, expected_improvement

logger = get_logger("tuner")

N_PARAMS = 8
BOUND_EPS = 1e-6
RATIO_EPS = 1e-9
WEIGHT_FIELDS = ("w1", "w2", "w3", "w4", "w5", "w6", "w7")
PARAM_NAMES = ("abplace_lambda",) + WEIGHT_FIELDS


class TuneSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    budget: int = Field(default=50, ge=1)
    candidates: int = Field(default=1024, ge=16)
    initial_fraction: float = Field(default=0.2, gt=0, le=1)

    @property
    def n_initial(self) -> int:
        return max(1, math.ceil(self.budget * self.initial_fraction))


@dataclass
class Evaluation:
    index: int
    params: np.ndarray
    objective: float
    metrics: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params": dict(zip(PARAM_NAMES, self.params.tolist())),
            "objective": self.objective if math.isfinite(self.objective) else None,
            "metrics": self.metrics,
        }


@dataclass
class TuneResult:
    best_params: np.ndarray
    best_objective: float
    best_config: PipelineConfig
    history: list[Evaluation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best": {
                "params": dict(zip(PARAM_NAMES, self.best_params.tolist())),
                "objective": self.best_objective if math.isfinite(self.best_objective) else None,
            },
            "best_config": self.best_config.model_dump(),
            "history": [e.to_dict() for e in self.history],
        }


# =============================================================================
# Parameter mapping and objective
# =============================================================================

def clip_unit(u: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(u, dtype=float), BOUND_EPS, 1.0 - BOUND_EPS)


def config_to_params(config: PipelineConfig) -> np.ndarray:
    values = [config.abplace_lambda] + [getattr(config, f) / 2.0 for f in WEIGHT_FIELDS]
    return clip_unit(np.array(values))


def params_to_config(u: np.ndarray, base: PipelineConfig) -> PipelineConfig:
    u = clip_unit(u)
    updates = {"abplace_lambda": float(u[0])}
    updates.update({f: float(2.0 * u[t + 1]) for t, f in enumerate(WEIGHT_FIELDS)})
    return base.model_copy(update=updates)


def ratio(value: float, baseline: float, eps: float = RATIO_EPS) -> float:
    if value <= eps and baseline <= eps:
        return 1.0
    return value / max(baseline, eps)


def proxy_objective(metrics: Metrics, baseline: Metrics) -> float:
    """hpwl, notch and periphery ratios against the baseline; 3.0 at the baseline itself."""
    return (
        ratio(metrics.hpwl, baseline.hpwl)
        + ratio(metrics.total_notch, baseline.total_notch)
        + ratio(metrics.mean_periphery_dist, baseline.mean_periphery_dist)
    )


# =============================================================================
# Search
# =============================================================================

def _sobol(n: int, seed: int) -> np.ndarray:
    if n <= 0:
        return np.zeros((0, N_PARAMS))
    sampler = qmc.Sobol(d=N_PARAMS, scramble=True, seed=seed)
    return clip_unit(sampler.random_base2(max(0, math.ceil(math.log2(n))))[:n])


def _propose(history: list[Evaluation], spec: TuneSpec, seed: int, round_: int) -> np.ndarray:
    finite = [e for e in history if math.isfinite(e.objective)]
    pool = _sobol(spec.candidates, seed * 1_000_003 + round_)
    if len(finite) < 2:
        return pool[0]
    X = np.vstack([e.params for e in finite])
    y = np.array([e.objective for e in finite])
    gp = GaussianProcess().fit(X, y).optimize_kernel()
    mean, std = gp.posterior(pool)
    ei = expected_improvement(mean, std, float(y.min()))
    return pool[int(np.argmax(ei))]


Evaluator = Callable[[PipelineConfig], Metrics]


def _default_evaluator(design: Design) -> Evaluator:
    def evaluate(config: PipelineConfig) -> Metrics:
        return run_pipeline(design, config, with_baseline=False).metrics
    return evaluate


def tune(
    design: Design,
    spec: Optional[TuneSpec] = None,
    seed: int = 1,
    base_config: Optional[PipelineConfig] = None,
    evaluate: Optional[Evaluator] = None,
) -> TuneResult:
    """
    Spend exactly spec.budget pipeline runs.

    Run 1 uses the base configuration and defines the baseline metrics;
    runs 2 .. n_initial follow a scrambled Sobol sequence, the rest maximize
    expected improvement. A failing run scores +inf and still uses budget.
    """
    spec = spec or TuneSpec()
    base = (base_config or PipelineConfig()).model_copy(update={"seed": seed})
    evaluate = evaluate or _default_evaluator(design)

    first = config_to_params(base)
    try:
        baseline = evaluate(params_to_config(first, base))
    except MacroForgeError as e:
        raise PipelineError(f"baseline run failed: {e}") from e

    history = [Evaluation(0, first, proxy_objective(baseline, baseline), baseline.to_dict())]
    logger.info(f"Tune baseline: hpwl={baseline.hpwl:.6g}")
    initial = _sobol(spec.n_initial - 1, seed)

    for index in range(1, spec.budget):
        if index < spec.n_initial:
            u = initial[index - 1]
        else:
            u = _propose(history, spec, seed, index)
        config = params_to_config(u, base)
        try:
            metrics = evaluate(config)
            value = proxy_objective(metrics, baseline)
            record = metrics.to_dict()
        except MacroForgeError as e:
            logger.warning(f"Tune run {index} failed: {e}")
            value, record = float("inf"), None
        history.append(Evaluation(index, clip_unit(u), value, record))
        logger.info(f"Tune run {index}: objective={value:.6g}")

    best = min(history, key=lambda e: e.objective)
    return TuneResult(
        best_params=best.params,
        best_objective=best.objective,
        best_config=params_to_config(best.params, base),
        history=history,
    )
