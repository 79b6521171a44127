"""
Small, highly optimised computational units written using Numba
"""

import numpy as np
import sklearn.neighbors as neighbors
from numba import njit


def find_neighbours(x, queries, radius):
    """
    Find the points of x lying strictly within radius of every query point

    Parameters
    ----------
    x : ndarray (float)
        Point coordinates, shape (n_points, 2)

    queries : ndarray (float)
        Query coordinates, shape (n_queries, 2)

    radius : float
        Disk model radius

    Returns
    -------
    neighbour_list : list of ndarray (int)
        Indices into x for each query, in ascending order

    Notes
    -----
    KDTree.query_radius is inclusive, so points at exactly `radius` are
    filtered out afterwards (disk model uses a strict comparison)
    """
    if len(x) == 0 or len(queries) == 0:
        return [np.zeros(0, dtype=np.intp) for _ in range(len(queries))]

    tree = neighbors.KDTree(x, leaf_size=40)
    indices, distances = tree.query_radius(queries, r=radius, return_distance=True)

    return [np.sort(ind[dist < radius]) for ind, dist in zip(indices, distances)]


def build_edge_list(pairs):
    """
    Build a lexicographically sorted, duplicate free edge list from an
    iterable of vertex pairs
    """
    edges = {(min(i, j), max(i, j)) for i, j in pairs if i != j}
    edges = np.array(sorted(edges), dtype=np.intc).reshape(-1, 2)

    return edges


@njit
def build_incidence_matrix(edges, n_vertices):
    """
    Build the incidence matrix A, shape (n_vertices, n_edges). Column l holds
    +1 at the first vertex of edge l and -1 at the second
    """
    n_edges = np.shape(edges)[0]
    A = np.zeros((n_vertices, n_edges))

    for k_edge in range(n_edges):
        A[edges[k_edge, 0], k_edge] = 1.0
        A[edges[k_edge, 1], k_edge] = -1.0

    return A


@njit
def build_laplacian(edges, n_vertices):
    """
    Build the graph Laplacian (degree on the diagonal, -1 per edge)
    """
    n_edges = np.shape(edges)[0]
    L = np.zeros((n_vertices, n_vertices))

    for k_edge in range(n_edges):
        vertex_i = edges[k_edge, 0]
        vertex_j = edges[k_edge, 1]

        L[vertex_i, vertex_i] += 1.0
        L[vertex_j, vertex_j] += 1.0
        L[vertex_i, vertex_j] -= 1.0
        L[vertex_j, vertex_i] -= 1.0

    return L


@njit
def build_adjacency(edges, n_vertices):
    """Dense boolean adjacency matrix"""
    n_edges = np.shape(edges)[0]
    adjacency = np.zeros((n_vertices, n_vertices), dtype=np.bool_)

    for k_edge in range(n_edges):
        adjacency[edges[k_edge, 0], edges[k_edge, 1]] = True
        adjacency[edges[k_edge, 1], edges[k_edge, 0]] = True

    return adjacency
