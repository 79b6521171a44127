import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pyrelay.deployment import Deployment
from pyrelay.graph import (
    NODE,
    OCCUPIED_RELAY,
    VACANT_SITE,
    Graph,
    build_disk_graph,
    occupy_relays,
)
from pyrelay.kernels.graph import build_edge_list, find_neighbours


def node_graph(n_vertices, edges):
    return Graph(n_vertices, build_edge_list(edges), [NODE] * n_vertices)


@st.composite
def random_graphs(draw, max_vertices=8):
    n_vertices = draw(st.integers(min_value=2, max_value=max_vertices))
    pairs = list(itertools.combinations(range(n_vertices), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return node_graph(n_vertices, chosen)


def count_components(graph, vertices):
    """Breadth-first search over the given vertices"""
    vertices = set(int(v) for v in vertices)
    neighbours = {v: set() for v in vertices}
    for i, j in graph.edge_set():
        if i in vertices and j in vertices:
            neighbours[i].add(j)
            neighbours[j].add(i)

    seen = set()
    n_components = 0
    for start in sorted(vertices):
        if start in seen:
            continue
        n_components += 1
        frontier = [start]
        seen.add(start)
        while frontier:
            v = frontier.pop()
            for u in neighbours[v] - seen:
                seen.add(u)
                frontier.append(u)
    return n_components


def test_find_neighbours_is_strict_and_sorted():
    x = np.array([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.5, 0.0)])
    neighbours = find_neighbours(x, np.array([(0.0, 0.0)]), 1.0)

    np.testing.assert_array_equal(neighbours[0], [0, 3])


def test_find_neighbours_without_points():
    neighbours = find_neighbours(np.zeros((0, 2)), np.array([(0.0, 0.0), (1.0, 1.0)]), 1.0)

    assert len(neighbours) == 2
    assert all(len(n) == 0 for n in neighbours)


def test_build_edge_list_sorts_and_removes_duplicates():
    edges = build_edge_list([(2, 1), (0, 1), (1, 2), (3, 3)])
    np.testing.assert_array_equal(edges, [[0, 1], [1, 2]])


def test_laplacian_of_a_single_edge():
    np.testing.assert_array_equal(node_graph(2, [(0, 1)]).laplacian(), [[1, -1], [-1, 1]])


def test_laplacian_of_an_edgeless_graph():
    np.testing.assert_array_equal(node_graph(3, []).laplacian(), np.zeros((3, 3)))


def test_laplacian_of_a_path():
    np.testing.assert_array_equal(
        node_graph(3, [(0, 1), (1, 2)]).laplacian(), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]
    )


def test_regularized_laplacian_of_a_single_edge():
    S = node_graph(2, [(0, 1)]).regularized_laplacian(0.5)

    np.testing.assert_allclose(S.entries, [[1.5, -1], [-1, 1.5]])
    np.testing.assert_allclose(S.eigenvalues, [0.5, 2.5])


def test_regularized_laplacian_of_an_edgeless_graph():
    S = node_graph(3, []).regularized_laplacian(0.5)
    np.testing.assert_allclose(S.entries, 0.5 * np.eye(3))


@pytest.mark.parametrize("gamma", [0.0, -1.0])
def test_non_positive_gamma_is_rejected(gamma):
    with pytest.raises(ValueError, match="gamma"):
        node_graph(2, [(0, 1)]).regularized_laplacian(gamma)


@given(random_graphs(), st.floats(min_value=1e-3, max_value=10.0))
@settings(max_examples=100, deadline=None, derandomize=True)
def test_laplacian_is_incidence_product(graph, gamma):
    A = graph.incidence()
    L = graph.laplacian()

    np.testing.assert_array_equal(L, A @ A.T)
    np.testing.assert_array_equal(L.sum(axis=1), np.zeros(graph.n_vertices))
    assert graph.regularized_laplacian(gamma).eigenvalues[0] > 0


def test_algebraic_connectivity_of_a_path():
    assert node_graph(3, [(0, 1), (1, 2)]).algebraic_connectivity() == pytest.approx(1.0)


def test_algebraic_connectivity_of_a_triangle():
    graph = node_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert graph.algebraic_connectivity() == pytest.approx(3.0)


def test_algebraic_connectivity_of_two_components():
    graph = node_graph(4, [(0, 1), (2, 3)])
    assert graph.algebraic_connectivity() == 0.0


def test_algebraic_connectivity_needs_two_active_vertices():
    graph = Graph(3, np.zeros((0, 2)), [NODE, VACANT_SITE, VACANT_SITE])

    with pytest.raises(ValueError, match="at least 2 active vertices"):
        graph.algebraic_connectivity()


@given(random_graphs())
@settings(max_examples=200, deadline=None, derandomize=True)
def test_algebraic_connectivity_is_zero_exactly_when_disconnected(graph):
    disconnected = count_components(graph, range(graph.n_vertices)) > 1
    lambda_2 = graph.algebraic_connectivity()

    if disconnected:
        assert lambda_2 == 0.0
    else:
        assert lambda_2 > 0.0


def test_vacant_sites_do_not_count_towards_connectivity(two_clusters):
    graph = occupy_relays(build_disk_graph(two_clusters), two_clusters, [0])

    assert graph.algebraic_connectivity() > 0.0
    assert graph.algebraic_connectivity(restrict_to_active=False) == 0.0


def test_graph_rejects_edges_on_vacant_sites():
    with pytest.raises(ValueError, match="vacant"):
        Graph(3, [(0, 2)], [NODE, NODE, VACANT_SITE])


def test_graph_rejects_unordered_edges():
    with pytest.raises(ValueError, match="i < j"):
        Graph(2, [(1, 0)], [NODE, NODE])


def test_graph_arrays_are_read_only(two_clusters):
    graph = build_disk_graph(two_clusters)

    with pytest.raises(ValueError):
        graph.edges[0, 0] = 5


def test_baseline_graph_of_two_clusters(two_clusters):
    graph = build_disk_graph(two_clusters)

    assert graph.n_vertices == 10
    assert graph.edge_set() == {(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)}
    assert len(graph.relay_vertices()) == 0
    np.testing.assert_array_equal(graph.vertex_kind[6:], [VACANT_SITE] * 4)


def test_occupy_no_sites_leaves_graph_unchanged(two_clusters):
    graph = build_disk_graph(two_clusters)
    assert occupy_relays(graph, two_clusters, []) is graph


def test_relay_between_two_nodes():
    deployment = Deployment([(1.0, 1.0), (3.0, 1.0)], [(2.0, 1.0)], 2.0)
    graph = occupy_relays(build_disk_graph(deployment), deployment, [0])

    assert graph.edge_set() == {(0, 2), (1, 2)}
    assert graph.vertex_kind[2] == OCCUPIED_RELAY


def test_relay_out_of_range_stays_isolated(two_clusters):
    baseline = build_disk_graph(two_clusters)
    graph = occupy_relays(baseline, two_clusters, [3])

    assert graph.edge_set() == baseline.edge_set()
    np.testing.assert_array_equal(graph.laplacian()[9], np.zeros(10))
    np.testing.assert_array_equal(graph.relay_vertices(), [9])


def test_relays_connect_to_each_other(two_clusters):
    graph = occupy_relays(build_disk_graph(two_clusters), two_clusters, [0, 1])

    assert (6, 7) in graph.edge_set()
    assert {(1, 6), (2, 6), (3, 6), (4, 6), (1, 7), (4, 7)} <= graph.edge_set()
    np.testing.assert_array_equal(graph.occupied_sites(), [0, 1])


def test_occupy_relays_in_steps_matches_one_call(two_clusters):
    baseline = build_disk_graph(two_clusters)
    one_call = occupy_relays(baseline, two_clusters, [1, 2])
    in_steps = occupy_relays(occupy_relays(baseline, two_clusters, [1]), two_clusters, [2])

    assert one_call.edge_set() == in_steps.edge_set()


@pytest.mark.parametrize(
    "sites, message", [([0, 0], "Duplicate"), ([4], "out of range"), ([-1], "out of range")]
)
def test_invalid_sites_are_rejected(two_clusters, sites, message):
    with pytest.raises(ValueError, match=message):
        occupy_relays(build_disk_graph(two_clusters), two_clusters, sites)


def test_occupied_site_cannot_be_occupied_again(two_clusters):
    graph = occupy_relays(build_disk_graph(two_clusters), two_clusters, [0])

    with pytest.raises(ValueError, match="already occupied"):
        occupy_relays(graph, two_clusters, [0])


@pytest.mark.parametrize("relay_edge_model", ["vertex", "bridge"])
def test_occupy_relays_is_monotone(rng, relay_edge_model):
    for _ in range(20):
        deployment = Deployment.sample(rng, n_nodes=12, n_sites=6, site_layout="uniform")
        baseline = build_disk_graph(deployment, relay_edge_model)

        larger = rng.choice(6, size=4, replace=False)
        smaller = larger[: rng.integers(0, 4)]

        assert (
            occupy_relays(baseline, deployment, smaller).edge_set()
            <= occupy_relays(baseline, deployment, larger).edge_set()
        )


def test_bridge_relay_joins_node_pairs(two_clusters):
    baseline = build_disk_graph(two_clusters, "bridge")
    graph = occupy_relays(baseline, two_clusters, [0])

    assert graph.relay_edge_model == "bridge"
    assert graph.edge_set() - baseline.edge_set() == {(1, 3), (1, 4), (2, 3), (2, 4)}
    np.testing.assert_array_equal(graph.active_vertices(), np.arange(6))
    assert graph.algebraic_connectivity() > 0.0


def test_unsupported_relay_edge_model():
    with pytest.raises(ValueError, match="relay edge model"):
        Graph(2, [(0, 1)], [NODE, NODE], "hyperedge")
