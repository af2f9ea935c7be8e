"""
Random perturbation of packing trees.

A mutation sequence keeps drawing operators until a stop draw: each of the
three operators has probability p/3 per draw and stopping has 1 - p, so the
sequence length is geometric with mean p / (1 - p).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .tree import PackingTree


class Operator(str, Enum):
    SWAP = "swap"
    ROTATE_LEFT = "rotate-left"
    ROTATE_RIGHT = "rotate-right"


_OPERATORS = (Operator.SWAP, Operator.ROTATE_LEFT, Operator.ROTATE_RIGHT)


@dataclass(frozen=True)
class MutationConfig:
    continue_probability: float = 2.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.continue_probability < 1.0:
            raise ValueError(
                f"continue_probability must lie in (0, 1), got {self.continue_probability}"
            )

    @property
    def expected_length(self) -> float:
        p = self.continue_probability
        return p / (1.0 - p)


def draw_mutation_sequence(config: MutationConfig, rng: np.random.Generator) -> list[Operator]:
    p = config.continue_probability
    ops: list[Operator] = []
    while True:
        r = rng.random()
        if r >= p:
            return ops
        ops.append(_OPERATORS[min(int(r / (p / 3.0)), 2)])


def apply_operator(tree: PackingTree, op: Operator, idx: int) -> bool:
    """Apply one operator in place at node idx; False when it was a no-op."""
    if op is Operator.SWAP:
        node = tree.nodes[idx]
        if node.left == node.right:
            return False
        tree.swap_children(idx)
        return True
    if op is Operator.ROTATE_LEFT:
        return tree.rotate_left(idx)
    return tree.rotate_right(idx)


def mutate(
    tree: PackingTree,
    config: MutationConfig,
    rng: np.random.Generator,
    nodes: Optional[Sequence[int]] = None,
) -> PackingTree:
    """
    Return a mutated copy of tree.

    Args:
        nodes: Node indices eligible as operator pivots. Defaults to every
            node. Pivots inside a freshly attached subtree leave the
            structure above that subtree untouched.
    """
    out = tree.copy()
    pool = list(range(len(out))) if nodes is None else list(nodes)
    if not pool:
        return out
    for op in draw_mutation_sequence(config, rng):
        idx = pool[int(rng.integers(len(pool)))]
        apply_operator(out, op, idx)
    return out
