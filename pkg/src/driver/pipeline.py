"""
Outer placement loop.

Each iteration runs one prototype, derives cluster centroids, builds the
(shrinking) ellipse, places the unplaced macros on it with ABPlace, and
relocates a budget of macro groups into the corners. Macros fixed in one
iteration are obstacles for every later one.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.abplace import build_anchors, build_ellipse, optimize, project_macros
from src.connectivity import (
    build_matrix,
    cluster_cells,
    cluster_labels,
    default_cluster_count,
    extract_dataflow,
    extract_direct,
    group_macros,
    singleton_groups,
)
from src.errors import CapExceededError, DesignError, MacroForgeError
from src.evaluator import Metrics, baseline_hpwl, evaluate_placement, stage_timings
from src.netlist import Design
from src.observability import MetricsCollector, RunLogger, RunTracer, get_logger
from src.packing import Corner, Rect, pack
from src.prototyper import Prototype, cluster_centroids, inject_prototype, run_prototype
from src.relocator import (
    PENALTY_NAMES,
    CornerLayout,
    RelocationContext,
    build_io_regions,
    default_notch_threshold,
    min_macros_per_round,
    relocate,
)
from .config import PipelineConfig
from .state import Analysis, IterationRecord, RunState

logger = get_logger("driver")

STAGE_PROTOTYPE = 0
STAGE_ABPLACE = 1
STAGE_RELOCATE = 2
STAGE_BASELINE = 3


def stage_seed_sequence(seed: int, k: int, stage: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, k, stage])


def stage_rng(seed: int, k: int, stage: int) -> np.random.Generator:
    """Independent generator per (seed, iteration, stage)."""
    return np.random.default_rng(stage_seed_sequence(seed, k, stage))


def stage_int_seed(seed: int, k: int, stage: int) -> int:
    return int(stage_seed_sequence(seed, k, stage).generate_state(1)[0])


# =============================================================================
# Setup
# =============================================================================

def analyze(design: Design, config: PipelineConfig, metrics: Optional[MetricsCollector] = None) -> Analysis:
    """Grouping, clustering, connection matrix and keepouts for one run."""
    metrics = metrics or MetricsCollector()
    with metrics.timer("clustering"):
        if config.use_macro_groups:
            groups = group_macros(
                design,
                footprint_tol=config.footprint_tol,
                signature_threshold=config.signature_threshold,
                net_degree_cap=config.net_degree_cap,
            )
        else:
            groups = singleton_groups(design)
        target = config.target_cluster_count or default_cluster_count(design.cell_count)
        clusters = cluster_cells(design, target, net_degree_cap=config.net_degree_cap)
        A_wl = extract_direct(design, clusters, net_degree_cap=config.net_degree_cap)
        A_df = extract_dataflow(design, clusters, d_max=config.d_max)
        matrix = build_matrix(A_wl, A_df, n_macros=design.macro_count)

    with metrics.timer("io"):
        io_regions = build_io_regions(
            design,
            depth_fraction=config.io_depth_fraction,
            width_fraction=config.io_width_fraction,
            enabled=config.io_keepout,
        )

    notch = config.notch_threshold
    if notch is None:
        notch = default_notch_threshold(design)
    logger.info(
        f"Analysis: {len(groups)} macro groups, {len(clusters)} cell clusters, "
        f"{len(io_regions.rects)} keepouts"
    )
    return Analysis(
        groups=tuple(groups),
        clusters=tuple(clusters),
        matrix=matrix,
        io_regions=io_regions,
        notch_threshold=float(notch),
    )


def initial_state(design: Design, config: PipelineConfig, analysis: Analysis) -> RunState:
    """k = 0: pre-placed macros are fixed, every other group is pending."""
    layout = CornerLayout.from_design(design, halo=config.halo)
    pending = [
        g for g in analysis.groups
        if not all(m in layout.placed for m in g.member_macro_ids)
    ]
    return RunState(k=0, layout=layout, unplaced_groups=pending)


# =============================================================================
# One outer iteration
# =============================================================================

def _prototype(design: Design, config: PipelineConfig, fixed: dict, k: int) -> Prototype:
    path = config.prototype_file
    if path is not None:
        return inject_prototype(design, path, fixed)
    return run_prototype(
        design,
        fixed,
        config.density_schedule(),
        k,
        stage_int_seed(config.seed, k, STAGE_PROTOTYPE),
        config.prototype_settings(),
    )


def _trace_corners(tracer: RunTracer, design: Design, layout: CornerLayout, k: int) -> None:
    names = [inst.name for inst in design.instances]
    text = [f"# iteration {k}\n"]
    rows = []
    for corner in Corner:
        tree = layout.trees[corner]
        text.append(tree.to_text(names))
        contour = pack(tree, layout.outline, layout.sizes, halo=layout.halo).contour
        for x0, x1, h in contour.segments():
            rows.append([corner.name, k, x0, x1, h])
    tracer.append_text("trees.txt", "".join(text))
    tracer.append_csv("contours.csv", ["corner", "k", "x_start", "x_end", "height"], rows)


def step(
    state: RunState,
    design: Design,
    config: PipelineConfig,
    analysis: Analysis,
    tracer: Optional[RunTracer] = None,
    metrics: Optional[MetricsCollector] = None,
    run_logger: Optional[RunLogger] = None,
) -> RunState:
    """Run outer iteration state.k + 1 and return the new state."""
    k = state.k + 1
    tracer = tracer or RunTracer()
    metrics = metrics or MetricsCollector()
    run_logger = run_logger or RunLogger(name="driver")
    try:
        return _step(state, k, design, config, analysis, tracer, metrics, run_logger)
    except MacroForgeError as e:
        if getattr(e, "iteration", None) is None:
            e.iteration = k
        raise


def _step(
    state: RunState,
    k: int,
    design: Design,
    config: PipelineConfig,
    analysis: Analysis,
    tracer: RunTracer,
    metrics: MetricsCollector,
    run_logger: RunLogger,
) -> RunState:
    layout = state.layout.copy()
    fixed = layout.centers()
    unplaced = state.unplaced_macros

    with run_logger.stage_context("prototype", iteration=k), metrics.timer("prototype"):
        proto = _prototype(design, config, fixed, k)
        metrics.increment("prototype_rounds")
        centroids = cluster_centroids(proto, analysis.clusters, design)

    positions = proto.positions.copy()
    for m, center in fixed.items():
        positions[m] = center

    ellipse = None
    abplace_initial = abplace_final = None
    with run_logger.stage_context("abplace", iteration=k), metrics.timer("abplace"):
        if config.use_ellipse and unplaced:
            ellipse = build_ellipse(
                design.outline, config.beta_init, config.beta_finish, gamma=config.resolved_gamma, k=k,
            )
            rng = stage_rng(config.seed, k, STAGE_ABPLACE)
            theta = project_macros(proto.positions[unplaced], ellipse, rng)
            if config.use_abplace:
                index = design.macro_index
                anchors = build_anchors(
                    analysis.matrix,
                    [index[m] for m in unplaced],
                    {index[m]: c for m, c in fixed.items()},
                    centroids,
                )
                result = optimize(
                    theta, anchors, design.sizes[unplaced], ellipse, config.abplace_lambda,
                    config.optimizer_settings(),
                )
                theta = result.theta
                abplace_initial, abplace_final = result.initial_objective, result.objective
                metrics.increment("abplace_iterations", result.iterations)
                tracer.append_csv(
                    "abplace_trace.csv",
                    ["k", "iteration", "objective"],
                    [[k, i, value] for i, value in enumerate(result.trace)],
                )
            positions[unplaced] = ellipse.points(theta)

    ctx = RelocationContext(
        design=design,
        matrix=analysis.matrix,
        positions=positions,
        centroids=centroids,
        io_regions=analysis.io_regions,
        notch_threshold=analysis.notch_threshold,
    )
    with run_logger.stage_context("relocating", iteration=k), metrics.timer("relocating"):
        outcome = relocate(
            layout,
            state.unplaced_groups,
            ctx,
            config.cost_weights(),
            stage_rng(config.seed, k, STAGE_RELOCATE),
            settings=config.relocate_settings(),
            n_min=min_macros_per_round(design.macro_count, config.n_min_fraction),
            run_logger=run_logger,
            tracer=tracer,
            metrics=metrics,
            iteration=k,
        )

    penalty_sums = state.penalty_sums.copy()
    for assignment in outcome.assignments:
        if assignment.penalties is not None:
            penalty_sums += assignment.penalties
    if outcome.remaining:
        metrics.increment("deferred_groups", len(outcome.remaining))
    if tracer.enabled:
        _trace_corners(tracer, design, layout, k)

    record = IterationRecord(
        k=k,
        target_density=proto.density_used,
        ellipse_scale=ellipse.scale if ellipse is not None else None,
        abplace_initial=abplace_initial,
        abplace_final=abplace_final,
        newly_placed=outcome.newly_placed,
        remaining_groups=[g.id for g in outcome.remaining],
    )
    run_logger.info(
        f"Iteration {k}: placed {len(outcome.newly_placed)} macros, "
        f"{len(outcome.remaining)} groups remaining",
        iteration=k,
        placed=len(layout.placed),
    )
    return state.advance(
        k=k,
        layout=layout,
        unplaced_groups=list(outcome.remaining),
        ellipse=ellipse,
        prototype=proto,
        history=state.history + [record],
        penalty_sums=penalty_sums,
    )


# =============================================================================
# Whole run
# =============================================================================

@dataclass
class FinalPlacement:
    design: Design
    rects: dict[int, Rect]
    metrics: Metrics
    state: RunState
    analysis: Analysis
    cell_positions: Optional[np.ndarray] = None
    timings: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return self.state.k


def final_cell_positions(
    design: Design,
    config: PipelineConfig,
    analysis: Analysis,
    rects: dict[int, Rect],
    k: int,
    prototype: Optional[Prototype] = None,
) -> Optional[np.ndarray]:
    """
    Cell rows hold their cluster centroid.

    With final_cell_prototype set (or no prototype yet) one more prototype
    runs with every macro fixed.
    """
    if design.cell_count == 0:
        return None
    if prototype is None or config.final_cell_prototype:
        fixed = {m: (x + w / 2.0, y + h / 2.0) for m, (x, y, w, h) in rects.items()}
        prototype = run_prototype(
            design,
            fixed,
            config.density_schedule(),
            max(k, 1),
            stage_int_seed(config.seed, k + 1, STAGE_PROTOTYPE),
            config.prototype_settings(),
        )
    centroids = cluster_centroids(prototype, analysis.clusters, design)
    labels = cluster_labels(design, analysis.clusters)
    cells = np.full((len(design.instances), 2), np.nan)
    mask = labels >= 0
    cells[mask] = centroids[labels[mask]]
    return cells


def run_pipeline(
    design: Design,
    config: Optional[PipelineConfig] = None,
    tracer: Optional[RunTracer] = None,
    metrics: Optional[MetricsCollector] = None,
    run_logger: Optional[RunLogger] = None,
    with_baseline: bool = True,
) -> FinalPlacement:
    """Place every macro; raises CapExceededError past max_outer_iterations."""
    config = config or PipelineConfig()
    tracer = tracer or RunTracer()
    metrics = metrics or MetricsCollector()
    run_logger = run_logger or RunLogger(run_id=f"seed{config.seed}", name="driver")

    with tracer.span("analysis"):
        analysis = analyze(design, config, metrics)
    state = initial_state(design, config, analysis)

    while not state.done:
        if state.k >= config.max_outer_iterations:
            raise CapExceededError(
                f"{len(state.unplaced_macros)} macros still unplaced after "
                f"{config.max_outer_iterations} iterations",
                iteration=state.k,
            )
        with tracer.span("iteration", k=state.k + 1):
            state = step(state, design, config, analysis, tracer, metrics, run_logger)

    rects = dict(sorted(state.placed.items()))
    with metrics.timer("prototype"):
        cells = final_cell_positions(design, config, analysis, rects, state.k, state.prototype)

    result = evaluate_placement(
        design,
        rects,
        cells,
        io_regions=analysis.io_regions,
        notch_threshold=analysis.notch_threshold,
        halo=config.halo,
    )
    result.iterations = state.k
    result.penalties = dict(zip(PENALTY_NAMES, state.penalty_sums.tolist()))
    if with_baseline:
        try:
            result.random_baseline_hpwl = baseline_hpwl(
                design, cells, seed=stage_int_seed(config.seed, 0, STAGE_BASELINE),
            )
        except DesignError as e:
            logger.warning(f"Random baseline skipped: {e}")

    timings = stage_timings(metrics, enabled=tracer.enabled)
    tracer.write_json("timings.json", timings)
    tracer.write_json("iterations.json", {"iterations": [r.to_dict() for r in state.history]})
    tracer.end_trace()
    logger.info(f"Placed {len(rects)} macros in {state.k} iterations, hpwl={result.hpwl:.6g}")

    return FinalPlacement(
        design=design,
        rects=rects,
        metrics=result,
        state=state,
        analysis=analysis,
        cell_positions=cells,
        timings=timings,
    )
