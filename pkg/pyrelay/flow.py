"""
Maximum flow
------------

Unit-capacity maximum flow between network nodes (Edmonds-Karp) and the
network-average maximum flow rate used as the flow objective.
"""

from dataclasses import dataclass

import numpy as np

from .graph import VACANT_SITE
from .kernels.flow import edmonds_karp, pairwise_flow_values


@dataclass(frozen=True)
class FlowResult:
    """
    Attributes
    ----------
    value : int
        Number of unit flows from source to sink

    augmenting_paths : tuple of tuple (int)
        Decomposition of the final flow into `value` source-to-sink vertex
        paths, pairwise edge-disjoint
    """

    value: int
    augmenting_paths: tuple


def max_flow(graph, source, sink):
    """
    Maximum source to sink flow where every undirected edge carries at most
    one unit

    Parameters
    ----------
    graph : Graph

    source : int
        Active (node or occupied relay) vertex

    sink : int
        Active vertex, different from source

    Returns
    -------
    result : FlowResult
    """
    source = int(source)
    sink = int(sink)

    if source == sink:
        raise ValueError(f"Source and sink must differ, got {source} twice")
    for vertex in (source, sink):
        if not 0 <= vertex < graph.n_vertices:
            raise ValueError(f"Vertex {vertex} out of range")
        if graph.vertex_kind[vertex] == VACANT_SITE:
            raise ValueError(f"Vertex {vertex} is a vacant candidate site")

    value, flow = edmonds_karp(graph.adjacency(), source, sink)

    return FlowResult(int(value), _decompose_flow(flow, source, sink, value))


def _decompose_flow(flow, source, sink, value):
    """
    Split a net unit flow into `value` simple source-to-sink paths

    Notes
    -----
    Each edge carries net flow in at most one direction and each unit is
    consumed once, so the paths are edge-disjoint. Circulations met on the
    way are cut out of the path.
    """
    remaining = flow > 0
    paths = []

    for _ in range(value):
        path = [source]
        while path[-1] != sink:
            u = path[-1]
            v = int(np.flatnonzero(remaining[u])[0])
            remaining[u, v] = False
            if v in path:
                del path[path.index(v) + 1 :]
            else:
                path.append(v)
        paths.append(tuple(path))

    return tuple(paths)


def pairwise_max_flow(graph):
    """
    Maximum flow value between every pair of network nodes

    Returns
    -------
    values : ndarray (int)
        Symmetric, shape (n_nodes, n_nodes), zero diagonal. Row i belongs to
        the i-th node vertex.
    """
    nodes = graph.node_vertices().astype(np.int64)
    return pairwise_flow_values(graph.adjacency(), nodes)


def source_flow(values, source, fixed_destination=False):
    """
    Per-source flow rate f(s, P)

    Parameters
    ----------
    values : ndarray (int)
        Output of pairwise_max_flow

    source : int
        Node index (row of values)

    fixed_destination : bool
        False - mean over the n - 1 destinations. True - the flow to the
        single destination (source + 1) mod n.
    """
    n_nodes = len(values)
    if fixed_destination:
        return float(values[source, (source + 1) % n_nodes])
    return float(values[source].sum() / (n_nodes - 1))


def avg_max_flow(graph, fixed_destination=False):
    """
    Network-average maximum flow rate f(P) = (1 / n) sum_s f(s, P)

    Parameters
    ----------
    graph : Graph
        Relay vertices carry flow but are never sources or sinks

    fixed_destination : bool
        See source_flow

    Returns
    -------
    rate : float
    """
    values = pairwise_max_flow(graph)
    n_nodes = len(values)
    if n_nodes < 2:
        raise ValueError(f"The average flow needs at least 2 nodes, got {n_nodes}")

    rates = [source_flow(values, s, fixed_destination) for s in range(n_nodes)]
    return float(np.sum(rates) / n_nodes)
