"""
Graph class
-----------

Disk model graphs over a fixed vertex set of n network nodes and Z candidate
relay sites, with incidence, Laplacian and algebraic connectivity views.
"""

import numpy as np
from scipy.sparse.csgraph import connected_components

from .kernels.graph import (
    find_neighbours,
    build_edge_list,
    build_incidence_matrix,
    build_laplacian,
    build_adjacency,
)
from .spd import SpdMatrix

NODE = 0
OCCUPIED_RELAY = 1
VACANT_SITE = 2

RELAY_EDGE_MODELS = ("vertex", "bridge")


class Graph:
    """
    Undirected graph on n + Z vertices

    Attributes
    ----------
    n_vertices : int
        n + Z, fixed for every graph of one deployment

    edges : ndarray (int)
        Edge list, shape (m, 2), each row (i, j) with i < j, rows in
        lexicographic order

    vertex_kind : ndarray (int)
        NODE, OCCUPIED_RELAY or VACANT_SITE for every vertex

    relay_edge_model : str
        "vertex" - an occupied relay is a vertex joined to everything within
        the disk radius. "bridge" - the relay vertex stays isolated and
        instead joins every pair of nodes lying within the disk radius of it.

    Notes
    -----
    * Instances are immutable, all arrays are read-only
    """

    def __init__(self, n_vertices, edges, vertex_kind, relay_edge_model="vertex"):
        """
        Graph class constructor

        Parameters
        ----------
        n_vertices : int

        edges : array_like (int)
            Sorted, duplicate free edge list (see build_edge_list)

        vertex_kind : array_like (int)

        relay_edge_model : str
        """
        if relay_edge_model not in RELAY_EDGE_MODELS:
            raise ValueError(
                f"Unsupported relay edge model '{relay_edge_model}'. Use 'vertex' or 'bridge'."
            )

        self.n_vertices = int(n_vertices)
        self.edges = np.array(edges, dtype=np.intc).reshape(-1, 2)
        self.vertex_kind = np.array(vertex_kind, dtype=np.int8)
        self.relay_edge_model = relay_edge_model

        if len(self.vertex_kind) != self.n_vertices:
            raise ValueError("vertex_kind must have one entry per vertex")
        if np.any(self.edges[:, 0] >= self.edges[:, 1]):
            raise ValueError("Edges must be stored as (i, j) with i < j (no self-loops)")
        if np.any(self.vertex_kind[self.edges] == VACANT_SITE):
            raise ValueError("An edge touches a vacant candidate site")

        self.edges.flags.writeable = False
        self.vertex_kind.flags.writeable = False

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_nodes(self):
        return int(np.count_nonzero(self.vertex_kind == NODE))

    def node_vertices(self):
        return np.flatnonzero(self.vertex_kind == NODE)

    def relay_vertices(self):
        return np.flatnonzero(self.vertex_kind == OCCUPIED_RELAY)

    def occupied_sites(self):
        """Site indices (not vertex indices) of every occupied relay"""
        return self.relay_vertices() - self.n_nodes

    def active_vertices(self):
        """
        Vertices taking part in the network: nodes and occupied relays. Under
        the bridge model relays carry no edges and only nodes are active.
        """
        if self.relay_edge_model == "bridge":
            return self.node_vertices()
        return np.flatnonzero(self.vertex_kind != VACANT_SITE)

    def edge_set(self):
        return {(int(i), int(j)) for i, j in self.edges}

    def incidence(self):
        """
        Incidence matrix A, shape (n_vertices, m)
        """
        return build_incidence_matrix(self.edges, self.n_vertices)

    def laplacian(self):
        """
        Graph Laplacian L = A A^T

        Returns
        -------
        L : ndarray (float)
            Symmetric positive semi-definite, zero row sums
        """
        return build_laplacian(self.edges, self.n_vertices)

    def regularized_laplacian(self, gamma=0.5):
        """
        Regularized Laplacian S = L + gamma I

        Parameters
        ----------
        gamma : float
            Regularization (default = 0.5). Must be positive.

        Returns
        -------
        S : SpdMatrix
            Smallest eigenvalue equal to gamma plus the smallest eigenvalue
            of L
        """
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")

        return SpdMatrix(self.laplacian() + gamma * np.eye(self.n_vertices))

    def adjacency(self):
        return build_adjacency(self.edges, self.n_vertices)

    def degree(self):
        return np.bincount(self.edges.ravel(), minlength=self.n_vertices)

    def algebraic_connectivity(self, restrict_to_active=True):
        """
        Second smallest eigenvalue of the Laplacian, lambda_2

        Parameters
        ----------
        restrict_to_active : bool
            Compute lambda_2 of the subgraph induced by the active vertices.
            Vacant sites are isolated and would otherwise pin lambda_2 at
            zero.

        Returns
        -------
        lambda_2 : float
            Exactly 0.0 when the (restricted) graph is disconnected

        Notes
        -----
        Connectivity is decided combinatorially, the eigensolver is only
        consulted for connected graphs
        """
        if restrict_to_active:
            vertices = self.active_vertices()
        else:
            vertices = np.arange(self.n_vertices)

        if len(vertices) < 2:
            raise ValueError(
                f"Algebraic connectivity needs at least 2 active vertices, got {len(vertices)}"
            )

        adjacency = self.adjacency()[np.ix_(vertices, vertices)]
        n_components, _ = connected_components(adjacency, directed=False)
        if n_components > 1:
            return 0.0

        L = self.laplacian()[np.ix_(vertices, vertices)]
        eigenvalues = np.linalg.eigvalsh(L)

        return max(float(eigenvalues[1]), 0.0)

    def __repr__(self):
        return (
            f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges}, "
            f"n_relays={len(self.relay_vertices())}, model='{self.relay_edge_model}')"
        )


def build_disk_graph(deployment, relay_edge_model="vertex"):
    """
    Build the baseline (no relay) disk model graph

    Parameters
    ----------
    deployment : Deployment

    relay_edge_model : str
        Carried by the graph and applied by occupy_relays

    Returns
    -------
    graph : Graph
        n + Z vertices, an edge between every pair of nodes closer than the
        disk radius, every site vacant
    """
    neighbour_list = find_neighbours(
        deployment.node_positions, deployment.node_positions, deployment.disk_radius
    )
    edges = build_edge_list(
        (i, j) for i, neighbours in enumerate(neighbour_list) for j in neighbours
    )

    vertex_kind = np.full(deployment.n_vertices, VACANT_SITE)
    vertex_kind[: deployment.n_nodes] = NODE

    return Graph(deployment.n_vertices, edges, vertex_kind, relay_edge_model)


def occupy_relays(graph, deployment, sites):
    """
    Deploy relays on candidate sites

    Parameters
    ----------
    graph : Graph
        Graph to extend (left unmodified)

    deployment : Deployment

    sites : sequence (int)
        Site indices to occupy, distinct, not already occupied and < Z

    Returns
    -------
    graph : Graph
        New graph with the listed sites tagged as occupied relays. Under the
        vertex model each new relay is joined to every node and every
        occupied relay within the disk radius. Under the bridge model every
        pair of nodes within the disk radius of a new relay is joined.
    """
    sites = [int(z) for z in sites]
    already = set(graph.occupied_sites().tolist())

    if len(set(sites)) != len(sites):
        raise ValueError(f"Duplicate site index in {sites}")
    for z in sites:
        if not 0 <= z < deployment.n_sites:
            raise ValueError(f"Site index {z} out of range for {deployment.n_sites} sites")
        if z in already:
            raise ValueError(f"Site {z} is already occupied")

    if not sites:
        return graph

    vertex_kind = graph.vertex_kind.copy()
    new_vertices = np.array([deployment.site_vertex(z) for z in sites])
    vertex_kind[new_vertices] = OCCUPIED_RELAY

    pairs = [tuple(edge) for edge in graph.edges.tolist()]
    relay_positions = deployment.positions[new_vertices]

    if graph.relay_edge_model == "vertex":
        candidates = np.flatnonzero(vertex_kind != VACANT_SITE)
        neighbour_list = find_neighbours(
            deployment.positions[candidates], relay_positions, deployment.disk_radius
        )
        for relay, neighbours in zip(new_vertices, neighbour_list):
            pairs += [(relay, candidates[k]) for k in neighbours]
    else:
        neighbour_list = find_neighbours(
            deployment.node_positions, relay_positions, deployment.disk_radius
        )
        for neighbours in neighbour_list:
            pairs += [(i, j) for i in neighbours for j in neighbours if i < j]

    edges = build_edge_list((int(i), int(j)) for i, j in pairs)

    return Graph(graph.n_vertices, edges, vertex_kind, graph.relay_edge_model)
