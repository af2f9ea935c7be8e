"""
Connectivity module for macroforge.

Macro grouping, cell clustering and the unified connection matrix.
"""

from .cliques import clique_pairs, DEFAULT_NET_DEGREE_CAP
from .grouping import (
    MacroGroup,
    group_macros,
    singleton_groups,
    group_of_macro,
    cosine_similarity,
)
from .clustering import (
    CellCluster,
    cluster_cells,
    cluster_labels,
    default_cluster_count,
)
from .extraction import (
    entity_of_node,
    entity_count,
    extract_direct,
    extract_dataflow,
    dataflow_graph,
    registered_depths,
)
from .matrix import (
    ConnectionMatrix,
    build_matrix,
    normalize_by_max,
    connectivity_to_dict,
)

__all__ = [
    "clique_pairs",
    "DEFAULT_NET_DEGREE_CAP",
    # Grouping
    "MacroGroup",
    "group_macros",
    "singleton_groups",
    "group_of_macro",
    "cosine_similarity",
    # Clustering
    "CellCluster",
    "cluster_cells",
    "cluster_labels",
    "default_cluster_count",
    # Extraction
    "entity_of_node",
    "entity_count",
    "extract_direct",
    "extract_dataflow",
    "dataflow_graph",
    "registered_depths",
    # Matrix
    "ConnectionMatrix",
    "build_matrix",
    "normalize_by_max",
    "connectivity_to_dict",
]
