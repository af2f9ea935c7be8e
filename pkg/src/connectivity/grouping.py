"""
Macro grouping by hierarchy, footprint and connection signature.

Macros are first bucketed by hierarchy parent and footprint, then split by
the cosine similarity of their direct-connection peer vectors. Pre-placed
macros always form singleton groups.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.netlist import Design
from src.observability import get_logger
from .cliques import clique_pairs, DEFAULT_NET_DEGREE_CAP

logger = get_logger("connectivity")

DEFAULT_FOOTPRINT_TOL = 0.05
DEFAULT_SIGNATURE_THRESHOLD = 0.9


@dataclass(frozen=True)
class MacroGroup:
    id: int
    member_macro_ids: tuple[int, ...]
    footprint: tuple[float, float]
    hier_path: tuple[str, ...] = ()
    # (peer pin-node, weight) pairs of the first member, sorted by peer
    signature: tuple[tuple[int, float], ...] = ()

    @property
    def size(self) -> int:
        return len(self.member_macro_ids)


def _same_footprint(a: tuple[float, float], b: tuple[float, float], tol: float) -> bool:
    return all(abs(x - y) <= tol * max(abs(x), abs(y)) for x, y in zip(a, b))


def _bucket_macros(design: Design, footprint_tol: float) -> list[list[int]]:
    """Bucket movable macros by hierarchy parent and footprint (compared against the first member)."""
    movable = [m for m in design.macro_ids if design.instances[m].fixed_at is None]
    ordered = sorted(
        movable,
        key=lambda m: (
            design.instances[m].hier_path,
            design.instances[m].width,
            design.instances[m].height,
            design.instances[m].name,
        ),
    )
    buckets: list[list[int]] = []
    for m in ordered:
        inst = design.instances[m]
        for bucket in buckets:
            head = design.instances[bucket[0]]
            if head.hier_path == inst.hier_path and _same_footprint(
                (head.width, head.height), (inst.width, inst.height), footprint_tol
            ):
                bucket.append(m)
                break
        else:
            buckets.append([m])
    return buckets


def peer_vectors(
    design: Design,
    buckets: list[list[int]],
    net_degree_cap: int = DEFAULT_NET_DEGREE_CAP,
) -> dict[int, dict[int, float]]:
    """
    Direct-connection peer weights per movable macro.

    Peers are instances and ports (pin nodes); peers inside the macro's own
    bucket are left out so array siblings do not distinguish each other.
    """
    bucket_of = {m: b for b, bucket in enumerate(buckets) for m in bucket}
    vectors: dict[int, dict[int, float]] = {m: defaultdict(float) for m in bucket_of}
    u, v, w = clique_pairs(design, net_degree_cap)
    for a, b, weight in zip(u.tolist(), v.tolist(), w.tolist()):
        if a == b:
            continue
        for src, peer in ((a, b), (b, a)):
            if src not in vectors:
                continue
            if bucket_of.get(peer) == bucket_of[src]:
                continue
            vectors[src][peer] += weight
    return {m: dict(vec) for m, vec in vectors.items()}


def cosine_similarity(a: dict[int, float], b: dict[int, float]) -> float:
    """Cosine of two sparse vectors; two empty vectors count as identical."""
    norm_a = np.sqrt(sum(x * x for x in a.values()))
    norm_b = np.sqrt(sum(x * x for x in b.values()))
    if norm_a == 0 and norm_b == 0:
        return 1.0
    if norm_a == 0 or norm_b == 0:
        return 0.0
    dot = sum(weight * b.get(peer, 0.0) for peer, weight in a.items())
    return float(dot / (norm_a * norm_b))


def group_macros(
    design: Design,
    footprint_tol: float = DEFAULT_FOOTPRINT_TOL,
    signature_threshold: float = DEFAULT_SIGNATURE_THRESHOLD,
    net_degree_cap: int = DEFAULT_NET_DEGREE_CAP,
) -> list[MacroGroup]:
    """
    Partition all macros into groups.

    Members of a group share hierarchy path, footprint (within footprint_tol
    relative tolerance) and a connection signature whose cosine similarity to
    the group's first member is at least signature_threshold. Groups are
    numbered by their smallest macro id.
    """
    buckets = _bucket_macros(design, footprint_tol)
    vectors = peer_vectors(design, buckets, net_degree_cap)

    raw: list[list[int]] = []
    for bucket in buckets:
        pending = list(bucket)
        while pending:
            head = pending[0]
            members = [head] + [
                m for m in pending[1:]
                if cosine_similarity(vectors[head], vectors[m]) >= signature_threshold
            ]
            raw.append(members)
            pending = [m for m in pending if m not in members]
    raw.extend([m] for m in design.preplaced_ids)

    raw.sort(key=min)
    groups = []
    for gid, members in enumerate(raw):
        head = design.instances[members[0]]
        signature = tuple(sorted(vectors.get(members[0], {}).items()))
        groups.append(MacroGroup(
            id=gid,
            member_macro_ids=tuple(sorted(members)),
            footprint=(head.width, head.height),
            hier_path=head.hier_path,
            signature=signature,
        ))
    logger.info(f"Grouped {design.macro_count} macros into {len(groups)} groups")
    return groups


def singleton_groups(design: Design) -> list[MacroGroup]:
    """One group per macro, used when grouping is switched off."""
    return [
        MacroGroup(
            id=k,
            member_macro_ids=(mid,),
            footprint=(design.instances[mid].width, design.instances[mid].height),
            hier_path=design.instances[mid].hier_path,
        )
        for k, mid in enumerate(design.macro_ids)
    ]


def group_of_macro(groups: list[MacroGroup], n_macros: Optional[int] = None) -> np.ndarray:
    """Group id per macro id."""
    size = n_macros if n_macros is not None else sum(g.size for g in groups)
    labels = np.full(size, -1, dtype=np.int64)
    for group in groups:
        labels[list(group.member_macro_ids)] = group.id
    return labels
