"""Unified connection matrix over [macros..., clusters...]."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.netlist import Design
from .clustering import CellCluster
from .grouping import MacroGroup


@dataclass(frozen=True)
class ConnectionMatrix:
    """
    A = normalize(A_wl) + normalize(A_df).

    Entities 0..n_macros-1 are macros (by macro id), the rest are clusters.
    """
    A: np.ndarray
    A_wl: np.ndarray
    A_df: np.ndarray
    n_macros: int

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @property
    def n_clusters(self) -> int:
        return self.size - self.n_macros

    def cluster_entity(self, cluster_id: int) -> int:
        return self.n_macros + cluster_id


def normalize_by_max(matrix: np.ndarray) -> np.ndarray:
    """Divide by the largest entry; an all-zero matrix is returned unchanged."""
    peak = float(matrix.max()) if matrix.size else 0.0
    if peak <= 0.0:
        return matrix.astype(float).copy()
    return matrix / peak


def build_matrix(A_wl: np.ndarray, A_df: np.ndarray, n_macros: int = 0) -> ConnectionMatrix:
    if A_wl.shape != A_df.shape:
        raise ValueError(f"component shapes differ: {A_wl.shape} vs {A_df.shape}")
    combined = normalize_by_max(A_wl) + normalize_by_max(A_df)
    np.fill_diagonal(combined, 0.0)
    return ConnectionMatrix(A=combined, A_wl=A_wl, A_df=A_df, n_macros=n_macros)


def connectivity_to_dict(
    design: Design,
    groups: Sequence[MacroGroup],
    clusters: Sequence[CellCluster],
    matrix: ConnectionMatrix,
) -> dict:
    """Debug export of partitions and matrices."""
    names = [design.instances[m].name for m in design.macro_ids]
    names += [f"cluster{c.id}" for c in clusters]
    return {
        "entities": names,
        "groups": [
            {"id": g.id, "macros": [design.instances[m].name for m in g.member_macro_ids]}
            for g in groups
        ],
        "clusters": [
            {"id": c.id, "size": c.size, "cells": [design.instances[i].name for i in c.member_cell_ids]}
            for c in clusters
        ],
        "A": matrix.A.round(12).tolist(),
        "A_wl": matrix.A_wl.round(12).tolist(),
        "A_df": matrix.A_df.round(12).tolist(),
    }
