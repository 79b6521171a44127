"""
Routing
-------

Cluster nodes around relays (cluster heads), compute minimum-hop
relay-to-relay routes and select the pair of parallel routes whose route
Laplacians are furthest apart under the Log-Euclidean metric.
"""

import csv
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .kernels.graph import build_edge_list, build_laplacian
from .kernels.routing import min_hop_path
from .spd import SpdMatrix, lem_distance

ROUTES_CSV_HEADER = ["relay_a", "relay_b", "hops", "path_vertices"]


@dataclass(frozen=True)
class Clustering:
    """
    Attributes
    ----------
    assignment : tuple (int)
        For every node, the position (in placement order) of its cluster
        head

    members : tuple of tuple (int)
        For every relay, the node indices of its cluster
    """

    assignment: tuple
    members: tuple


@dataclass(frozen=True)
class Route:
    """
    Relay-to-relay route

    Attributes
    ----------
    relay_a, relay_b : int
        Endpoint relay vertices, relay_a < relay_b

    path : tuple (int)
        Vertices from relay_a to relay_b, empty when unreachable

    edges : tuple of tuple (int)
        Route edges as (i, j) with i < j

    laplacian : SpdMatrix or None
        Regularized Laplacian over the full vertex set built from the route
        edges only, None when unreachable
    """

    relay_a: int
    relay_b: int
    path: tuple
    edges: tuple
    laplacian: SpdMatrix = None

    @property
    def reachable(self):
        return len(self.path) > 0

    @property
    def hops(self):
        return len(self.path) - 1 if self.reachable else -1

    def interior(self):
        """Route vertices other than the two endpoint relays"""
        return set(self.path) - {self.relay_a, self.relay_b}


def assign_clusters(deployment, placement):
    """
    Associate every node with its nearest relay (Euclidean distance, ties to
    the lowest relay position in the placement)

    Parameters
    ----------
    deployment : Deployment

    placement : Placement

    Returns
    -------
    clustering : Clustering
    """
    if placement.k == 0:
        raise ValueError("Clustering needs at least one relay")

    heads = deployment.candidate_sites[list(placement.occupied_sites)]
    distances = cdist(deployment.node_positions, heads)
    assignment = np.argmin(distances, axis=1)

    members = tuple(
        tuple(int(i) for i in np.flatnonzero(assignment == r)) for r in range(placement.k)
    )
    return Clustering(tuple(int(r) for r in assignment), members)


def route_laplacian(edges, n_vertices, gamma=0.5):
    """Regularized Laplacian of a route, over the full vertex set"""
    edges = np.array(edges, dtype=np.intc).reshape(-1, 2)
    return SpdMatrix(build_laplacian(edges, n_vertices) + gamma * np.eye(n_vertices))


def shortest_route(graph, relay_a, relay_b, gamma=0.5):
    """
    Minimum-hop route between two occupied relays

    Parameters
    ----------
    graph : Graph

    relay_a, relay_b : int
        Relay vertices

    gamma : float
        Regularization of the route Laplacian (same as placement)

    Returns
    -------
    route : Route
        Unreachable pairs give a route with an empty path (route.reachable
        is False)

    Notes
    -----
    Ties between equally short paths go to the lowest-index predecessor,
    walking back from relay_b
    """
    relay_a, relay_b = sorted((int(relay_a), int(relay_b)))
    relays = set(graph.relay_vertices().tolist())
    for relay in (relay_a, relay_b):
        if relay not in relays:
            raise ValueError(f"Vertex {relay} is not an occupied relay")
    if relay_a == relay_b:
        raise ValueError(f"A route needs two distinct relays, got {relay_a} twice")

    path = min_hop_path(graph.adjacency(), relay_a, relay_b)
    if len(path) == 0:
        return Route(relay_a, relay_b, (), ())

    path = tuple(int(v) for v in path)
    edges = tuple(tuple(edge) for edge in build_edge_list(zip(path[:-1], path[1:])).tolist())

    return Route(relay_a, relay_b, path, edges, route_laplacian(edges, graph.n_vertices, gamma))


def relay_routes(graph, gamma=0.5):
    """
    One minimum-hop route for every pair of relays, K (K - 1) / 2 routes in
    lexicographic (relay_a, relay_b) order
    """
    return [
        shortest_route(graph, a, b, gamma)
        for a, b in itertools.combinations(graph.relay_vertices().tolist(), 2)
    ]


def select_parallel_routes(routes):
    """
    The pair of routes maximizing the Log-Euclidean distance between their
    Laplacians

    Parameters
    ----------
    routes : sequence of Route
        Reachable routes with Laplacians of equal dimension

    Returns
    -------
    pair : tuple (Route, Route)
        Ties go to the first pair in lexicographic (relay_a, relay_b) order,
        so the result does not depend on the order of routes
    """
    if len(routes) < 2:
        raise ValueError(f"Parallel route selection needs at least 2 routes, got {len(routes)}")
    if any(not route.reachable for route in routes):
        raise ValueError("Parallel route selection needs reachable routes only")

    routes = sorted(routes, key=lambda route: (route.relay_a, route.relay_b, route.path))

    best_pair, best_distance = None, -np.inf
    for first, second in itertools.combinations(routes, 2):
        distance = lem_distance(first.laplacian, second.laplacian)
        if distance > best_distance:
            best_pair, best_distance = (first, second), distance

    return best_pair


def overlap_stats(route_1, route_2, include_endpoints=False):
    """
    Congestion overlap between two routes

    Parameters
    ----------
    route_1, route_2 : Route

    include_endpoints : bool
        False - each route's own endpoint relays are excluded before the
        shared vertices are counted

    Returns
    -------
    shared_nodes : int

    shared_edges : int
        Common undirected edges
    """
    if include_endpoints:
        vertices_1, vertices_2 = set(route_1.path), set(route_2.path)
    else:
        vertices_1, vertices_2 = route_1.interior(), route_2.interior()

    shared_nodes = len(vertices_1 & vertices_2)
    shared_edges = len(set(route_1.edges) & set(route_2.edges))

    return shared_nodes, shared_edges


def write_routes_csv(routes, f):
    """
    Write routes as CSV rows `relay_a, relay_b, hops, path_vertices` with the
    path ;-separated (empty and hops = -1 when unreachable)
    """
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(ROUTES_CSV_HEADER)
    for route in routes:
        writer.writerow(
            [route.relay_a, route.relay_b, route.hops, ";".join(map(str, route.path))]
        )
