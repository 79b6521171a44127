"""
Minimum-hop route search - small, highly optimised computational units
written using Numba
"""

import numpy as np
from numba import njit


@njit
def hop_distances(adjacency, source):
    """
    Breadth-first hop distance from source to every vertex (-1 when
    unreachable)
    """
    n_vertices = np.shape(adjacency)[0]
    distance = np.full(n_vertices, -1, dtype=np.int64)
    queue = np.empty(n_vertices, dtype=np.int64)

    distance[source] = 0
    queue[0] = source
    head = 0
    tail = 1

    while head < tail:
        u = queue[head]
        head += 1
        for v in range(n_vertices):
            if adjacency[u, v] and distance[v] == -1:
                distance[v] = distance[u] + 1
                queue[tail] = v
                tail += 1

    return distance


@njit
def min_hop_path(adjacency, source, target):
    """
    Minimum-hop path from source to target

    Returns
    -------
    path : ndarray (int)
        Vertices from source to target, empty when target is unreachable

    Notes
    -----
    Unit edge weights make Dijkstra's algorithm a breadth-first search.
    Walking back from the target, the predecessor is the lowest-index
    neighbour one hop closer to the source.
    """
    distance = hop_distances(adjacency, source)
    n_vertices = np.shape(adjacency)[0]

    if distance[target] == -1:
        return np.zeros(0, dtype=np.int64)

    path = np.empty(distance[target] + 1, dtype=np.int64)
    v = target
    path[distance[target]] = target

    while v != source:
        for u in range(n_vertices):
            if adjacency[u, v] and distance[u] == distance[v] - 1:
                v = u
                break
        path[distance[v]] = v

    return path
