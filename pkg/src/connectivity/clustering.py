"""
Hierarchy-based standard-cell clustering.

Two phases: cut the hierarchy tree at the shallowest depth that yields at
least the target cluster count, then merge or split until the count lies
in [target/2, 2*target].
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.netlist import Design
from src.observability import get_logger
from .cliques import clique_pairs, DEFAULT_NET_DEGREE_CAP

logger = get_logger("connectivity")


@dataclass(frozen=True)
class CellCluster:
    id: int
    member_cell_ids: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.member_cell_ids)


def default_cluster_count(n_cells: int) -> int:
    return max(1, round(math.sqrt(n_cells) / 2))


def _hierarchy_cut(design: Design, target: int) -> list[tuple[tuple[str, ...], list[int]]]:
    cells = design.cell_ids
    max_depth = max((len(design.instances[c].hier_path) for c in cells), default=0)
    buckets: dict[tuple[str, ...], list[int]] = {}
    for depth in range(max_depth + 1):
        buckets = defaultdict(list)
        for c in cells:
            buckets[design.instances[c].hier_path[:depth]].append(c)
        if len(buckets) >= target:
            break
    return sorted(buckets.items(), key=lambda kv: min(kv[1]))


def _common_prefix(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _cluster_affinity(design: Design, labels: np.ndarray, k: int, net_degree_cap: int) -> np.ndarray:
    u, v, w = clique_pairs(design, net_degree_cap)
    lu, lv = labels[u], labels[v]
    keep = (lu >= 0) & (lv >= 0) & (lu != lv)
    affinity = np.zeros((k, k))
    np.add.at(affinity, (lu[keep], lv[keep]), w[keep])
    return affinity + affinity.T


def cluster_cells(
    design: Design,
    target_cluster_count: int,
    net_degree_cap: int = DEFAULT_NET_DEGREE_CAP,
) -> list[CellCluster]:
    """
    Partition the standard cells into roughly target_cluster_count clusters.

    Clusters are re-indexed by their smallest member id, so the result does
    not depend on dictionary or merge order.
    """
    if target_cluster_count < 1:
        raise ValueError(f"target_cluster_count must be >= 1, got {target_cluster_count}")
    if not design.cell_ids:
        return []

    target = target_cluster_count
    cut = _hierarchy_cut(design, target)
    members = [list(cells) for _, cells in cut]
    prefixes = [prefix for prefix, _ in cut]

    # merge phase
    if len(members) > 2 * target:
        n_nodes = len(design.instances) + len(design.ports)
        labels = np.full(n_nodes, -1, dtype=np.int64)
        for cid, cells in enumerate(members):
            labels[cells] = cid
        affinity = _cluster_affinity(design, labels, len(members), net_degree_cap)
        alive = [True] * len(members)
        count = len(members)
        while count > 2 * target:
            smallest = min(
                (i for i in range(len(members)) if alive[i]),
                key=lambda i: (len(members[i]), i),
            )
            others = [j for j in range(len(members)) if alive[j] and j != smallest]
            best = max(
                others,
                key=lambda j: (
                    affinity[smallest, j],
                    _common_prefix(prefixes[smallest], prefixes[j]),
                    -j,
                ),
            )
            members[best].extend(members[smallest])
            members[smallest] = []
            affinity[best, :] += affinity[smallest, :]
            affinity[:, best] += affinity[:, smallest]
            affinity[best, best] = 0.0
            affinity[smallest, :] = 0.0
            affinity[:, smallest] = 0.0
            alive[smallest] = False
            count -= 1
        members = [m for m, a in zip(members, alive) if a]

    # split phase
    while 2 * len(members) < target:
        largest = max(range(len(members)), key=lambda i: (len(members[i]), -i))
        if len(members[largest]) < 2:
            break
        cells = sorted(members[largest])
        half = len(cells) // 2
        members[largest] = cells[:half]
        members.append(cells[half:])

    members.sort(key=min)
    clusters = [
        CellCluster(id=i, member_cell_ids=tuple(sorted(cells)))
        for i, cells in enumerate(members)
    ]
    logger.info(f"Clustered {design.cell_count} cells into {len(clusters)} clusters (target {target})")
    return clusters


def cluster_labels(design: Design, clusters: Sequence[CellCluster]) -> np.ndarray:
    """Cluster id per instance (-1 for macros)."""
    labels = np.full(len(design.instances), -1, dtype=np.int64)
    for cluster in clusters:
        labels[list(cluster.member_cell_ids)] = cluster.id
    return labels
