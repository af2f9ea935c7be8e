"""
Macro relocating: fix whole groups into corner trees until the round budget is met.

Each round picks the best group-corner entry of the preference matrix,
tries every slot of that corner, refines the survivors evolutionarily and
commits the winner. A failed assignment masks its entry and the matrix is
consulted again.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from src.connectivity import MacroGroup
from src.errors import StuckError
from src.observability import MetricsCollector, RunLogger, RunTracer, get_logger
from src.packing import Corner, MutationConfig
from .assignment import CandidateEvaluator, try_assignment
from .cost import RelocationContext
from .layout import CornerLayout
from .preference import CostWeights, compute_preference
from .search import DEFAULT_N_POP, DEFAULT_N_TOTAL, DEFAULT_TOURNAMENT_SIZE, corner_packing_search

logger = get_logger("relocator")


@dataclass(frozen=True)
class RelocateSettings:
    n_eps: int = 20
    n_total: int = DEFAULT_N_TOTAL
    n_pop: int = DEFAULT_N_POP
    tournament_size: int = DEFAULT_TOURNAMENT_SIZE
    n_min_fraction: float = 0.1
    mutation_p: float = 2.0 / 3.0
    normalize_preference: bool = False


def min_macros_per_round(total_macros: int, fraction: float = 0.1) -> int:
    """At least ceil(fraction * total) macros are fixed per relocate call."""
    return max(1, math.ceil(fraction * total_macros - 1e-9))


@dataclass
class Assignment:
    group_id: int
    corner: Corner
    macro_ids: tuple[int, ...]
    slots: int
    cost: float
    penalties: Optional[np.ndarray] = None


@dataclass
class RelocateResult:
    layout: CornerLayout
    assignments: list[Assignment] = field(default_factory=list)
    remaining: list[MacroGroup] = field(default_factory=list)
    masked: int = 0
    split_groups: list[int] = field(default_factory=list)

    @property
    def newly_placed(self) -> list[int]:
        return [m for a in self.assignments for m in a.macro_ids]


def split_group(group: MacroGroup, next_id: int) -> list[MacroGroup]:
    return [
        MacroGroup(
            id=next_id + k,
            member_macro_ids=(m,),
            footprint=group.footprint,
            hier_path=group.hier_path,
        )
        for k, m in enumerate(group.member_macro_ids)
    ]


def relocate(
    layout: CornerLayout,
    groups: Sequence[MacroGroup],
    ctx: RelocationContext,
    weights: CostWeights,
    rng: np.random.Generator,
    settings: Optional[RelocateSettings] = None,
    n_min: Optional[int] = None,
    run_logger: Optional[RunLogger] = None,
    tracer: Optional[RunTracer] = None,
    metrics: Optional[MetricsCollector] = None,
    iteration: Optional[int] = None,
) -> RelocateResult:
    """
    Fix at least n_min macros (whole groups, so possibly more) into corners.

    The layout is updated in place, and the ctx.positions rows of newly
    fixed macros move to their packed centers. Groups that fit nowhere are
    returned in remaining; StuckError is raised only when nothing at all was
    placed.

    Args:
        n_min: Round budget; defaults to ceil(n_min_fraction * all macros).
    """
    settings = settings or RelocateSettings()
    design = ctx.design
    if n_min is None:
        n_min = min_macros_per_round(design.macro_count, settings.n_min_fraction)
    mutation = MutationConfig(settings.mutation_p)
    w = weights.w_array

    pending = sorted(groups, key=lambda g: g.id)
    masks: dict[int, set[Corner]] = {g.id: set() for g in pending}
    next_id = max((g.id for g in pending), default=-1) + 1
    result = RelocateResult(layout=layout)
    placed_count = 0

    while pending and placed_count < n_min:
        pref = compute_preference(
            pending, design, ctx.positions, layout.corner_util(), ctx.io_regions, weights,
            normalize=settings.normalize_preference,
        )
        for row, group in enumerate(pending):
            for corner in masks[group.id]:
                pref.mask(row, corner)

        if pref.all_banned:
            splittable = [g for g in pending if g.size > 1]
            if splittable:
                for group in splittable:
                    parts = split_group(group, next_id)
                    next_id += len(parts)
                    pending.remove(group)
                    pending.extend(parts)
                    masks.update({p.id: set() for p in parts})
                    result.split_groups.append(group.id)
                    if metrics:
                        metrics.increment("deferred_groups")
                    logger.info(f"Split group {group.id} into {len(parts)} singletons")
                pending.sort(key=lambda g: g.id)
                continue
            if placed_count == 0:
                raise StuckError([g.id for g in pending])
            break

        row, corner = pref.best()
        group = pending[row]
        trial = try_assignment(
            group, corner, layout, ctx, w, settings.n_eps, rng, mutation=mutation,
        )
        if metrics:
            metrics.increment("candidate_evaluations", trial.evaluations)

        if not trial.candidates:
            masks[group.id].add(corner)
            result.masked += 1
            if metrics:
                metrics.increment("masked_assignments")
            logger.debug(f"Masked group {group.id} at {corner.name} ({trial.slot_count} slots infeasible)")
            continue

        evaluator = CandidateEvaluator(group, corner, layout, ctx)
        best = corner_packing_search(
            trial.candidates,
            evaluator,
            trial.normalizer,
            w,
            rng,
            n_total=settings.n_total,
            n_pop=settings.n_pop,
            tournament_size=settings.tournament_size,
            mutation=mutation,
        )
        if metrics:
            metrics.increment("candidate_evaluations", evaluator.evaluations)

        new = layout.commit(best.tree, best.packed)
        centers = layout.centers()
        for m in new:
            ctx.positions[m] = centers[m]
        placed_count += len(new)
        assignment = Assignment(
            group_id=group.id,
            corner=corner,
            macro_ids=tuple(group.member_macro_ids),
            slots=trial.slot_count,
            cost=best.cost,
            penalties=best.penalties,
        )
        result.assignments.append(assignment)
        pending.remove(group)

        if run_logger:
            run_logger.log_assignment(group.id, corner.name, trial.slot_count, best.cost)
        if tracer:
            tracer.append_jsonl("relocating.jsonl", {
                "iteration": iteration,
                "group": group.id,
                "corner": corner.name,
                "macros": [design.instances[m].name for m in group.member_macro_ids],
                "slots": trial.slot_count,
                "feasible_slots": len(trial.candidates),
                "best_cost": best.cost,
                "penalties": best.penalties.tolist(),
            })

    result.remaining = pending
    return result
