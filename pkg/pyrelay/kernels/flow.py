"""
Unit-capacity maximum flow - small, highly optimised computational units
written using Numba
"""

import numpy as np
from numba import njit, prange


@njit
def edmonds_karp(adjacency, source, sink):
    """
    Edmonds-Karp maximum flow on an undirected unit-capacity graph

    Parameters
    ----------
    adjacency : ndarray (bool)
        Dense adjacency matrix, shape (n_vertices, n_vertices)

    source : int

    sink : int

    Returns
    -------
    value : int
        Maximum flow value (number of edge-disjoint paths)

    flow : ndarray (int)
        Antisymmetric net flow, flow[u, v] in {-1, 0, 1}

    Notes
    -----
    Every undirected edge is a pair of antiparallel unit arcs sharing a
    residual, so the residual capacity of (u, v) is 1 - flow[u, v]. The
    breadth-first search visits neighbours in ascending index order, so the
    augmenting paths are deterministic.
    """
    n_vertices = np.shape(adjacency)[0]
    flow = np.zeros((n_vertices, n_vertices), dtype=np.int64)
    parent = np.empty(n_vertices, dtype=np.int64)
    queue = np.empty(n_vertices, dtype=np.int64)
    value = 0

    while True:
        parent[:] = -1
        parent[source] = source
        head = 0
        tail = 1
        queue[0] = source

        while head < tail and parent[sink] == -1:
            u = queue[head]
            head += 1
            for v in range(n_vertices):
                if parent[v] == -1 and adjacency[u, v] and flow[u, v] < 1:
                    parent[v] = u
                    queue[tail] = v
                    tail += 1

        if parent[sink] == -1:
            break

        v = sink
        while v != source:
            u = parent[v]
            flow[u, v] += 1
            flow[v, u] -= 1
            v = u

        value += 1

    return value, flow


@njit(parallel=True)
def pairwise_flow_values(adjacency, terminals):
    """
    Maximum flow value between every pair of terminal vertices

    Parameters
    ----------
    adjacency : ndarray (bool)

    terminals : ndarray (int)
        Vertices acting as sources and sinks (network nodes)

    Returns
    -------
    values : ndarray (int)
        Symmetric matrix, shape (n_terminals, n_terminals), zero diagonal

    Notes
    -----
    Each source writes only its own row of the upper triangle, the lower
    triangle is mirrored afterwards, so the result does not depend on thread
    scheduling
    """
    n_terminals = len(terminals)
    values = np.zeros((n_terminals, n_terminals), dtype=np.int64)

    for i in prange(n_terminals):
        for j in range(i + 1, n_terminals):
            value, _ = edmonds_karp(adjacency, terminals[i], terminals[j])
            values[i, j] = value

    for i in range(n_terminals):
        for j in range(i + 1, n_terminals):
            values[j, i] = values[i, j]

    return values
