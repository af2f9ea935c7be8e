"""
Evolutionary refinement of the per-slot candidates of one assignment.

Each generation draws n_pop parents by tournament, mutates them over the
group's nodes, and keeps the n_pop best of parents plus offspring.
"""

from typing import Optional, Sequence

import numpy as np

from src.packing import MutationConfig, mutate
from .assignment import Candidate, CandidateEvaluator
from .cost import PenaltyNormalizer

DEFAULT_N_TOTAL = 100
DEFAULT_N_POP = 5
DEFAULT_TOURNAMENT_SIZE = 2


def generation_count(n_total: int, n_pop: int) -> int:
    return max(n_total, 0) // n_pop


def tournament_select(
    population: Sequence[Candidate],
    rng: np.random.Generator,
    tournament_size: int = DEFAULT_TOURNAMENT_SIZE,
) -> Candidate:
    """Best of tournament_size members drawn with replacement; ties go to the lower index."""
    picks = rng.integers(len(population), size=tournament_size)
    return min((population[int(i)] for i in sorted(picks)), key=lambda c: c.cost)


def _offspring(
    parent: Candidate,
    evaluator: CandidateEvaluator,
    normalizer: PenaltyNormalizer,
    weights: np.ndarray,
    mutation: MutationConfig,
    rng: np.random.Generator,
) -> Candidate:
    tree = mutate(parent.tree, mutation, rng, nodes=parent.group_nodes)
    child = evaluator.evaluate(tree, parent.slot, parent.group_nodes)
    child.cost = normalizer.scalar(child.penalties, weights)
    return child


def corner_packing_search(
    candidates: Sequence[Candidate],
    evaluator: CandidateEvaluator,
    normalizer: PenaltyNormalizer,
    weights: np.ndarray,
    rng: np.random.Generator,
    n_total: int = DEFAULT_N_TOTAL,
    n_pop: int = DEFAULT_N_POP,
    tournament_size: int = DEFAULT_TOURNAMENT_SIZE,
    mutation: Optional[MutationConfig] = None,
) -> Candidate:
    """
    Return the lowest-cost candidate after n_total // n_pop generations.

    The normalizer of the seeding batch is reused for every offspring, so
    costs stay comparable and the result never scores worse than the best
    seed.
    """
    if not candidates:
        raise ValueError("corner packing search needs at least one candidate")
    if n_pop < 1:
        raise ValueError(f"n_pop must be positive, got {n_pop}")
    mutation = mutation or MutationConfig()
    generations = generation_count(n_total, n_pop)

    population = sorted(candidates, key=lambda c: c.cost)[:n_pop]
    if generations == 0:
        return population[0]

    seeds = list(population)
    k = 0
    while len(population) < n_pop:
        population.append(_offspring(seeds[k % len(seeds)], evaluator, normalizer, weights, mutation, rng))
        k += 1
    population.sort(key=lambda c: c.cost)

    for _ in range(generations):
        parents = [tournament_select(population, rng, tournament_size) for _ in range(n_pop)]
        children = [_offspring(p, evaluator, normalizer, weights, mutation, rng) for p in parents]
        population = sorted(population + children, key=lambda c: c.cost)[:n_pop]
    return population[0]
