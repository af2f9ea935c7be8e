"""Clique decomposition of nets into weighted pin-node pairs."""

import numpy as np

from src.netlist import Design

DEFAULT_NET_DEGREE_CAP = 64


def clique_pairs(design: Design, net_degree_cap: int = DEFAULT_NET_DEGREE_CAP):
    """
    Clique decomposition of every net with q <= cap pins.

    Returns (u, v, w): pin-node pairs in pin order with weight 2/q. Pin nodes
    index instances first, then ports.
    """
    starts = design.net_starts
    nodes = design.pin_nodes
    degrees = np.array([net.degree for net in design.nets], dtype=np.int64)

    us, vs, ws = [], [], []
    for q in np.unique(degrees):
        if q < 2 or q > net_degree_cap:
            continue
        rows = starts[degrees == q][:, None] + np.arange(q)[None, :]
        members = nodes[rows]
        iu, ju = np.triu_indices(q, k=1)
        us.append(members[:, iu].ravel())
        vs.append(members[:, ju].ravel())
        ws.append(np.full(members.shape[0] * len(iu), 2.0 / q))
    if not us:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    return np.concatenate(us), np.concatenate(vs), np.concatenate(ws)
