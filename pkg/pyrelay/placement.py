"""
Relay placement
---------------

Position K relays on candidate sites: greedy one-relay-at-a-time search,
joint exhaustive search and the distributed (regional) LEM variant.
"""

import csv
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import build_disk_graph, occupy_relays
from .objective import LogEuclidean, make_objective

logger = logging.getLogger(__name__)

PLACEMENT_CSV_HEADER = ["step", "site_index", "site_x", "site_y", "objective", "value"]


@dataclass(frozen=True)
class Placement:
    """
    Attributes
    ----------
    occupied_sites : tuple (int)
        Site indices in the order they were occupied

    objective_name : str
        "lem", "lambda2", "maxflow" or "distributed-lem"

    objective_trace : tuple (float)
        Objective value after each occupation step

    skipped_regions : tuple (int)
        Distributed placement only: regions without candidate sites, which
        contribute no relay
    """

    occupied_sites: tuple
    objective_name: str
    objective_trace: tuple
    skipped_regions: tuple = ()

    def __post_init__(self):
        if len(set(self.occupied_sites)) != len(self.occupied_sites):
            raise ValueError(f"Duplicate site index in {self.occupied_sites}")
        if len(self.objective_trace) != len(self.occupied_sites):
            raise ValueError("The objective trace needs one value per occupied site")

    @property
    def k(self):
        return len(self.occupied_sites)

    def prefix(self, k):
        """
        The first k steps. For a greedy placement this is the greedy
        placement of k relays.
        """
        return Placement(
            self.occupied_sites[:k], self.objective_name, self.objective_trace[:k]
        )

    def to_csv_rows(self, deployment):
        """
        Rows `step, site_index, site_x, site_y, objective, value`
        """
        return [
            [
                step,
                site,
                float(deployment.candidate_sites[site, 0]),
                float(deployment.candidate_sites[site, 1]),
                self.objective_name,
                float(value),
            ]
            for step, (site, value) in enumerate(
                zip(self.occupied_sites, self.objective_trace), start=1
            )
        ]


def write_placement_csv(placement, deployment, f):
    """
    Write a placement as CSV to an open text file
    """
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(PLACEMENT_CSV_HEADER)
    writer.writerows(placement.to_csv_rows(deployment))


def greedy_place(deployment, objective, k, gamma=0.5, relay_edge_model="vertex"):
    """
    Greedy relay placement: starting from the baseline network, occupy the
    site that maximizes the objective, one relay at a time

    Parameters
    ----------
    deployment : Deployment

    objective : Objective or str
        "lem", "lambda2" or "maxflow"

    k : int
        Number of relays, 1 <= k < Z

    gamma : float
        Laplacian regularization used when objective is given by name

    relay_edge_model : str

    Returns
    -------
    placement : Placement

    Notes
    -----
    * Ties go to the lowest site index
    * The LEM objective always compares against the no-relay network
    """
    objective = make_objective(objective, gamma)
    _check_k(k, deployment.n_sites)

    graph = build_disk_graph(deployment, relay_edge_model)
    sites, trace = _greedy_steps(deployment, graph, objective, k)

    return Placement(tuple(sites), objective.name, tuple(trace))


def _greedy_steps(deployment, graph, objective, k):
    baseline = objective.baseline(graph)
    sites = []
    trace = []

    for step in range(k):
        best_site, best_value, graph = _best_site(
            deployment, graph, objective, baseline, occupied=sites
        )
        sites.append(best_site)
        trace.append(best_value)
        logger.debug(
            "%s step %d: site %d, value %.6g", objective.name, step + 1, best_site, best_value
        )

    return sites, trace


def _best_site(deployment, graph, objective, baseline, occupied):
    """
    Evaluate every unoccupied site added to graph and return the argmax
    (lowest index on ties) with its value and graph
    """
    best_site, best_value, best_graph = None, -np.inf, None

    for site in range(deployment.n_sites):
        if site in occupied:
            continue
        candidate = occupy_relays(graph, deployment, [site])
        value = objective.evaluate(candidate, baseline)
        if value > best_value:
            best_site, best_value, best_graph = site, value, candidate

    return best_site, float(best_value), best_graph


def exhaustive_place(
    deployment, objective, k, gamma=0.5, relay_edge_model="vertex", budget=100_000
):
    """
    Joint exhaustive relay placement over all size-k subsets of the
    candidate sites

    Parameters
    ----------
    budget : int
        Largest number of subsets C(Z, k) that will be evaluated

    Returns
    -------
    placement : Placement
        The argmax subset in ascending site order (first subset in
        lexicographic order on ties). The trace holds the objective of each
        prefix of that subset.
    """
    objective = make_objective(objective, gamma)
    _check_k(k, deployment.n_sites)

    n_subsets = math.comb(deployment.n_sites, k)
    if n_subsets > budget:
        raise ValueError(
            f"C({deployment.n_sites}, {k}) = {n_subsets} subsets exceeds the exhaustive "
            f"search budget of {budget}; use greedy_place instead"
        )

    graph = build_disk_graph(deployment, relay_edge_model)
    baseline = objective.baseline(graph)

    best_subset, best_value = None, -np.inf
    for subset in itertools.combinations(range(deployment.n_sites), k):
        value = objective.evaluate(occupy_relays(graph, deployment, subset), baseline)
        if value > best_value:
            best_subset, best_value = subset, value

    trace = [
        objective.evaluate(occupy_relays(graph, deployment, best_subset[:step]), baseline)
        for step in range(1, k)
    ]
    trace.append(best_value)
    logger.debug("%s exhaustive: subset %s, value %.6g", objective.name, best_subset, best_value)

    return Placement(tuple(best_subset), objective.name, tuple(float(v) for v in trace))


def partition_regions(area, k):
    """
    Partition the area into k equal, non-overlapping rectangles

    Parameters
    ----------
    area : tuple (float)

    k : int

    Returns
    -------
    regions : list of tuple (float)
        (x_min, x_max, y_min, y_max) for each region, row by row from the
        origin. The grid has r rows and k / r columns, r being the largest
        divisor of k not above sqrt(k) (k = 4 gives quarters).
    """
    if k < 1:
        raise ValueError(f"Number of regions must be positive, got {k}")

    n_rows = max(r for r in range(1, math.isqrt(k) + 1) if k % r == 0)
    n_cols = k // n_rows
    width, height = area
    xs = np.linspace(0.0, width, n_cols + 1)
    ys = np.linspace(0.0, height, n_rows + 1)

    return [
        (float(xs[col]), float(xs[col + 1]), float(ys[row]), float(ys[row + 1]))
        for row in range(n_rows)
        for col in range(n_cols)
    ]


def distributed_place(deployment, k, gamma=0.5, relay_edge_model="vertex"):
    """
    Distributed LEM placement: the area is split into k regions and each
    region places one relay on one of its own candidate sites. A region sees
    its own nodes plus the nodes outside it that one of its sites can reach,
    with its own no-relay baseline over those nodes. Regions ignore each
    other's relays.

    Returns
    -------
    placement : Placement
        Union of the regional picks in region order. The trace holds each
        region's LEM value; regions without candidate sites are listed in
        skipped_regions.
    """
    objective = LogEuclidean(gamma)
    sites = []
    trace = []
    skipped = []

    for i_region, bounds in enumerate(partition_regions(deployment.area, k)):
        local, _, site_index = deployment.region(bounds, reach=True)

        if local.n_sites == 0:
            logger.warning("Region %d %s holds no candidate site", i_region, bounds)
            skipped.append(i_region)
            continue

        graph = build_disk_graph(local, relay_edge_model)
        local_sites, local_trace = _greedy_steps(local, graph, objective, 1)
        sites.append(int(site_index[local_sites[0]]))
        trace.append(local_trace[0])

    return Placement(tuple(sites), "distributed-lem", tuple(trace), tuple(skipped))


def place(
    deployment,
    objective,
    k,
    gamma=0.5,
    relay_edge_model="vertex",
    search="greedy",
    budget=100_000,
    fixed_destination=False,
):
    """
    Dispatch to greedy_place, exhaustive_place or distributed_place
    """
    if objective == "distributed-lem":
        return distributed_place(deployment, k, gamma, relay_edge_model)

    objective = make_objective(objective, gamma, fixed_destination)
    if search == "greedy":
        return greedy_place(deployment, objective, k, gamma, relay_edge_model)
    if search == "exhaustive":
        return exhaustive_place(deployment, objective, k, gamma, relay_edge_model, budget)

    raise ValueError(f"Unsupported search '{search}'. Use 'greedy' or 'exhaustive'.")


def _check_k(k, n_sites):
    if k < 1:
        raise ValueError(f"At least one relay is required, got k={k}")
    if k >= n_sites:
        raise ValueError(f"k={k} relays need more than k candidate sites, got Z={n_sites}")
