"""
Deterministic synthetic design generator.

Produces desk-scale stand-ins for real macro-placement benchmarks:
- a balanced hierarchy tree, every instance sitting in one leaf
- macros in small arrays sharing footprint, hierarchy and connection peers
- flip-flop and combinational cells, nets biased toward their own leaf
- ports on the die boundary
"""

import itertools
import math
from typing import Optional

import numpy as np

from src.errors import InfeasibleAreaError, DesignError
from .design import (
    ChipOutline,
    Design,
    Instance,
    InstanceKind,
    Port,
    PinRef,
    PinKind,
    Net,
)

MAX_UTILIZATION = 0.6
# largest macro side as a share of the shorter die side
MAX_MACRO_SIDE = 0.3
DECIMALS = 4


def _floor(value: float) -> float:
    scale = 10 ** DECIMALS
    return math.floor(value * scale) / scale


def _round(value: float) -> float:
    return round(float(value), DECIMALS)


def hierarchy_leaves(fanout: int, depth: int) -> list[tuple[str, ...]]:
    """All leaf paths of a balanced hierarchy tree, e.g. ('b0', 'b1')."""
    if depth == 0:
        return [()]
    return [
        tuple(f"b{i}" for i in combo)
        for combo in itertools.product(range(fanout), repeat=depth)
    ]


def generate_synthetic(
    seed: int,
    n_macros: int,
    n_cells: int,
    n_nets: int,
    outline: ChipOutline,
    *,
    utilization: float = 0.3,
    fanout: int = 2,
    depth: int = 3,
    ff_fraction: float = 0.25,
    intra_bias: float = 0.85,
    n_ports: Optional[int] = None,
    max_array: int = 4,
) -> Design:
    """
    Build a random but reproducible design.

    Args:
        seed: RNG seed; equal seeds give byte-identical serializations.
        n_macros: Number of macros (>= 1).
        n_cells: Number of standard cells.
        n_nets: Target net count; array nets are always generated first.
        outline: Die outline.
        utilization: Total macro area over die area (<= 0.6).
        fanout / depth: Shape of the balanced hierarchy tree.
        ff_fraction: Share of cells that are flip-flops.
        intra_bias: Probability a random-net pin stays in the net's home leaf.
        n_ports: Boundary ports (default max(4, n_macros)).
        max_array: Largest macro array size.
    """
    if n_macros < 1:
        raise DesignError("synthetic designs need at least one macro")
    if utilization > MAX_UTILIZATION or utilization <= 0:
        raise InfeasibleAreaError(utilization * outline.area, MAX_UTILIZATION * outline.area)

    rng = np.random.default_rng(seed)
    W, H = outline.width, outline.height
    leaves = hierarchy_leaves(fanout, depth)

    # -------------------------------------------------------------------------
    # Macro arrays
    # -------------------------------------------------------------------------
    arrays: list[dict] = []
    remaining = n_macros
    while remaining > 0:
        size = int(min(remaining, rng.integers(1, max_array + 1)))
        arrays.append({
            "size": size,
            "aspect": float(rng.uniform(0.5, 2.0)),
            "rel_area": float(rng.uniform(0.5, 1.5)),
            "leaf": leaves[int(rng.integers(len(leaves)))],
        })
        remaining -= size

    total_rel = sum(a["size"] * a["rel_area"] for a in arrays)
    scale = math.sqrt(utilization * outline.area / total_rel)
    longest = max(
        max(math.sqrt(a["rel_area"] * a["aspect"]), math.sqrt(a["rel_area"] / a["aspect"]))
        for a in arrays
    )
    scale = min(scale, MAX_MACRO_SIDE * min(W, H) / longest)

    instances: list[Instance] = []
    array_members: list[list[int]] = []
    for a in arrays:
        w = _floor(math.sqrt(a["rel_area"] * a["aspect"]) * scale)
        h = _floor(math.sqrt(a["rel_area"] / a["aspect"]) * scale)
        members = []
        for _ in range(a["size"]):
            members.append(len(instances))
            instances.append(Instance(
                id=len(instances),
                name=f"m{len(instances)}",
                kind=InstanceKind.MACRO,
                width=w,
                height=h,
                hier_path=a["leaf"],
            ))
        array_members.append(members)

    # -------------------------------------------------------------------------
    # Standard cells
    # -------------------------------------------------------------------------
    row_height = _round(0.01 * min(W, H))
    cells_by_leaf: dict[tuple[str, ...], list[int]] = {leaf: [] for leaf in leaves}
    ffs_by_leaf: dict[tuple[str, ...], list[int]] = {leaf: [] for leaf in leaves}
    for _ in range(n_cells):
        leaf = leaves[int(rng.integers(len(leaves)))]
        is_ff = bool(rng.random() < ff_fraction)
        cid = len(instances)
        instances.append(Instance(
            id=cid,
            name=f"c{cid - n_macros}",
            kind=InstanceKind.CELL,
            width=_round(row_height * rng.uniform(0.5, 2.0)),
            height=row_height,
            is_flip_flop=is_ff,
            hier_path=leaf,
        ))
        cells_by_leaf[leaf].append(cid)
        if is_ff:
            ffs_by_leaf[leaf].append(cid)
    all_cells = [i for i in range(n_macros, len(instances))]

    # -------------------------------------------------------------------------
    # Ports
    # -------------------------------------------------------------------------
    ports: list[Port] = []
    for pid in range(n_ports if n_ports is not None else max(4, n_macros)):
        edge = int(rng.integers(4))
        t = float(rng.uniform(0.05, 0.95))
        if edge == 0:
            x, y = 0.0, _round(t * H)
        elif edge == 1:
            x, y = W, _round(t * H)
        elif edge == 2:
            x, y = _round(t * W), 0.0
        else:
            x, y = _round(t * W), H
        ports.append(Port(id=pid, name=f"p{pid}", x=x, y=y))

    # -------------------------------------------------------------------------
    # Nets
    # -------------------------------------------------------------------------
    pin_lists: list[list[PinRef]] = []

    def inst_pin(i: int) -> PinRef:
        return PinRef(PinKind.INSTANCE, int(i))

    def pick_endpoint(leaf: tuple[str, ...], prefer_ff: bool) -> PinRef:
        pool = (ffs_by_leaf[leaf] if prefer_ff else []) or cells_by_leaf[leaf] or all_cells
        if pool:
            return inst_pin(pool[int(rng.integers(len(pool)))])
        return PinRef(PinKind.PORT, int(rng.integers(len(ports))))

    for members, a in zip(array_members, arrays):
        leaf = a["leaf"]
        # shared input bus: one driver register fans out to every array member
        driver = pick_endpoint(leaf, prefer_ff=True)
        side = pick_endpoint(leaf, prefer_ff=False)
        bus = [driver] + [inst_pin(m) for m in members]
        if side != driver:
            bus.append(side)
        pin_lists.append(bus)
        # per-macro outputs into a shared pair of capture registers
        sink_a = pick_endpoint(leaf, prefer_ff=True)
        sink_b = pick_endpoint(leaf, prefer_ff=True)
        sinks = [sink_a] if sink_a == sink_b else [sink_a, sink_b]
        for m in members:
            pin_lists.append([inst_pin(m)] + sinks)

    n_random = max(0, n_nets - len(pin_lists))
    pool_size = len(all_cells)
    for _ in range(n_random):
        if pool_size < 2:
            break
        leaf = leaves[int(rng.integers(len(leaves)))]
        q = int(min(2 + rng.geometric(0.5) - 1, 8))
        chosen: list[int] = []
        pins: list[PinRef] = []
        attempts = 0
        while len(pins) < q and attempts < 4 * q:
            attempts += 1
            if ports and rng.random() < 0.05:
                pin = PinRef(PinKind.PORT, int(rng.integers(len(ports))))
                if pin not in pins:
                    pins.append(pin)
                continue
            local = cells_by_leaf[leaf]
            pool = local if (local and rng.random() < intra_bias) else all_cells
            cid = pool[int(rng.integers(len(pool)))]
            if cid not in chosen:
                chosen.append(cid)
                pins.append(inst_pin(cid))
        if len(pins) >= 2:
            pin_lists.append(pins)

    nets = tuple(
        Net(id=i, name=f"n{i}", pins=tuple(pins)) for i, pins in enumerate(pin_lists)
    )
    return Design(
        outline=outline,
        instances=tuple(instances),
        ports=tuple(ports),
        nets=nets,
    )
