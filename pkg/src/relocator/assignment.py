"""
Trying one group in one corner.

Every empty slot of the corner's tree gets a random subtree over the group,
followed by a walk of mutation sequences over the group's own nodes; each
tree along the walk is packed and scored. The best tree per slot survives.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from src.connectivity import MacroGroup
from src.packing import (
    Corner,
    MutationConfig,
    PackedPlacement,
    PackingTree,
    SlotRef,
    attach_subtree,
    enumerate_slots,
    mutate,
    pack,
)
from .cost import PenaltyNormalizer, RelocationContext, evaluate_cost, penalty_vector
from .layout import CornerLayout


@dataclass
class Candidate:
    corner: Corner
    slot: SlotRef
    tree: PackingTree
    packed: PackedPlacement
    group_nodes: tuple[int, ...]
    penalties: Optional[np.ndarray] = None
    cost: float = float("inf")

    @property
    def feasible(self) -> bool:
        return self.penalties is not None


class CandidateEvaluator:
    """Packs and scores trees for one (group, corner) pair against a frozen layout."""

    def __init__(self, group: MacroGroup, corner: Corner, layout: CornerLayout, ctx: RelocationContext):
        self.group = group
        self.corner = Corner(corner)
        self.layout = layout
        self.ctx = ctx
        self.obstacles = layout.obstacles_for(self.corner)
        self.reference = layout.corner_rects(self.corner)
        self.evaluations = 0

    def evaluate(self, tree: PackingTree, slot: SlotRef, group_nodes: Sequence[int]) -> Candidate:
        self.evaluations += 1
        packed = pack(
            tree,
            self.layout.outline,
            self.layout.sizes,
            halo=self.layout.halo,
            obstacles=self.obstacles,
            reference=self.reference,
        )
        penalties = penalty_vector(packed, self.group, self.layout, self.ctx) if packed.legal else None
        return Candidate(
            corner=self.corner,
            slot=slot,
            tree=tree,
            packed=packed,
            group_nodes=tuple(group_nodes),
            penalties=penalties,
        )


@dataclass
class TrialResult:
    """Best candidate per feasible slot plus the batch normalization bounds."""
    candidates: list[Candidate]
    normalizer: PenaltyNormalizer
    slot_count: int
    evaluations: int
    batch: list[Candidate] = field(default_factory=list, repr=False)


def try_assignment(
    group: MacroGroup,
    corner: Corner,
    layout: CornerLayout,
    ctx: RelocationContext,
    weights: np.ndarray,
    n_eps: int,
    rng: np.random.Generator,
    mutation: Optional[MutationConfig] = None,
) -> TrialResult:
    """
    Evaluate exactly n_eps trees per slot.

    Costs are normalized over every evaluation of the call; slots whose
    evaluations are all infeasible are dropped, so an empty candidate list
    means the corner cannot take the group.
    """
    if n_eps < 1:
        raise ValueError(f"n_eps must be positive, got {n_eps}")
    mutation = mutation or MutationConfig()
    evaluator = CandidateEvaluator(group, corner, layout, ctx)
    base_tree = layout.trees[Corner(corner)]
    slots = enumerate_slots(base_tree)

    per_slot: list[list[Candidate]] = []
    for slot in slots:
        tree, _ = attach_subtree(base_tree, slot, list(group.member_macro_ids), rng)
        nodes = tuple(range(len(base_tree), len(tree)))
        walk = [evaluator.evaluate(tree, slot, nodes)]
        for _ in range(n_eps - 1):
            tree = mutate(tree, mutation, rng, nodes=nodes)
            walk.append(evaluator.evaluate(tree, slot, nodes))
        per_slot.append(walk)

    batch = [c for walk in per_slot for c in walk]
    costs, normalizer = evaluate_cost([c.penalties for c in batch], weights)
    for candidate, cost in zip(batch, costs):
        candidate.cost = cost

    best: list[Candidate] = []
    for walk in per_slot:
        winner = min(walk, key=lambda c: c.cost)
        if np.isfinite(winner.cost):
            best.append(winner)
    return TrialResult(
        candidates=best,
        normalizer=normalizer,
        slot_count=len(slots),
        evaluations=evaluator.evaluations,
        batch=batch,
    )
