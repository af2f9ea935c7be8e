"""
Direct-connection and dataflow affinity extraction.

Both extractors work on the entity space [macros..., clusters...]; ports are
terminals only and never become entities.
"""

from typing import Sequence

import networkx as nx
import numpy as np

from src.netlist import Design
from src.observability import get_logger
from .clustering import CellCluster
from .cliques import clique_pairs, DEFAULT_NET_DEGREE_CAP

logger = get_logger("connectivity")

DEFAULT_DMAX = 3


# =============================================================================
# Node and entity indexing
# =============================================================================

def entity_of_node(design: Design, clusters: Sequence[CellCluster]) -> np.ndarray:
    """
    Entity index for every pin node (instances first, then ports).

    Macros map to their macro index, cells to M + cluster id, ports to -1.
    """
    n_inst = len(design.instances)
    mapping = np.full(n_inst + len(design.ports), -1, dtype=np.int64)
    for k, mid in enumerate(design.macro_ids):
        mapping[mid] = k
    offset = design.macro_count
    for cluster in clusters:
        mapping[list(cluster.member_cell_ids)] = offset + cluster.id
    return mapping


def entity_count(design: Design, clusters: Sequence[CellCluster]) -> int:
    return design.macro_count + len(clusters)


# =============================================================================
# Direct connections
# =============================================================================

def extract_direct(
    design: Design,
    clusters: Sequence[CellCluster],
    net_degree_cap: int = DEFAULT_NET_DEGREE_CAP,
) -> np.ndarray:
    """Wirelength affinity A_wl: clique pair weights aggregated per entity pair."""
    n = entity_count(design, clusters)
    entity = entity_of_node(design, clusters)
    u, v, w = clique_pairs(design, net_degree_cap)

    eu, ev = entity[u], entity[v]
    keep = (eu >= 0) & (ev >= 0) & (eu != ev)
    matrix = np.zeros((n, n))
    np.add.at(matrix, (eu[keep], ev[keep]), w[keep])
    return matrix + matrix.T


# =============================================================================
# Dataflow
# =============================================================================

def _out_node(node: int) -> tuple[str, int]:
    return ("out", node)


def _in_node(node: int) -> tuple[str, int]:
    return ("in", node)


def dataflow_graph(design: Design) -> nx.DiGraph:
    """
    Pin-level directed graph for registered-depth search.

    Every net adds driver -> sink edges. Macros and ports are split into
    separate in/out nodes so a search entering them stops there; flip-flops
    and combinational cells share one node so traversal passes through them.
    Entering a flip-flop, macro or port costs 1, a combinational cell 0.
    """
    n_inst = len(design.instances)
    is_ff = np.array([inst.is_flip_flop for inst in design.instances] + [False] * len(design.ports))
    is_macro = np.array([inst.is_macro for inst in design.instances] + [False] * len(design.ports))
    is_port = np.arange(n_inst + len(design.ports)) >= n_inst

    def split(node: int) -> bool:
        return bool(is_macro[node] or is_port[node])

    graph = nx.DiGraph()
    nodes = design.pin_nodes
    for net_idx, start in enumerate(design.net_starts):
        degree = design.nets[net_idx].degree
        pins = nodes[start:start + degree]
        driver = int(pins[0])
        src = _out_node(driver) if split(driver) else driver
        for sink in pins[1:]:
            sink = int(sink)
            if sink == driver:
                continue
            dst = _in_node(sink) if split(sink) else sink
            registered = bool(is_macro[sink] or is_ff[sink] or is_port[sink])
            graph.add_edge(src, dst, weight=1 if registered else 0)
    return graph


def registered_depths(graph: nx.DiGraph, macro_id: int, d_max: int) -> dict[int, int]:
    """Minimum registered depth 1..d_max of every macro and flip-flop reachable from a macro."""
    source = _out_node(macro_id)
    if source not in graph:
        return {}
    lengths = nx.single_source_dijkstra_path_length(graph, source, cutoff=d_max, weight="weight")
    depths: dict[int, int] = {}
    for node, depth in lengths.items():
        if depth < 1:
            continue
        if isinstance(node, tuple):
            kind, idx = node
            if kind != "in":
                continue
        else:
            idx = node
        if idx == macro_id:
            continue
        depths[idx] = int(depth)
    return depths


def extract_dataflow(
    design: Design,
    clusters: Sequence[CellCluster],
    d_max: int = DEFAULT_DMAX,
) -> np.ndarray:
    """
    Dataflow affinity A_df.

    For each source macro, every macro or flip-flop sink at minimum registered
    depth D <= d_max adds 1/2^D to (source entity, sink entity). Combinational
    cells are transparent and ports end a path without contributing.
    """
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    n = entity_count(design, clusters)
    entity = entity_of_node(design, clusters)
    graph = dataflow_graph(design)
    is_ff = {inst.id for inst in design.instances if inst.is_flip_flop}

    directed = np.zeros((n, n))
    for macro_id in design.macro_ids:
        src_entity = entity[macro_id]
        for sink, depth in sorted(registered_depths(graph, macro_id, d_max).items()):
            if sink >= len(design.instances):
                continue
            if not (design.instances[sink].is_macro or sink in is_ff):
                continue
            dst_entity = entity[sink]
            if dst_entity < 0:
                continue
            directed[src_entity, dst_entity] += 0.5 ** depth

    matrix = directed + directed.T
    np.fill_diagonal(matrix, 0.0)
    return matrix
