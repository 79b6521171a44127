"""
Monte Carlo experiments
-----------------------

Every trial draws its own deployment (or channel set) from a generator keyed
by (seed, trial), so results do not depend on the number of workers or the
order in which trials finish.

Notes
-----
* Greedy placements are computed once per trial up to k_max; the placement
  of K relays is the K-step prefix
* K = 0 is the shared no-relay baseline and is recorded once per scheme
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from .beamforming import (
    build_codebook,
    channel_ridge,
    channel_spd,
    exp_correlation,
    genie_rate,
    link_rate,
    sample_channels,
    train_classifier,
)
from .config import ConfigError
from .deployment import Deployment
from .flow import avg_max_flow
from .graph import build_disk_graph, occupy_relays
from .placement import distributed_place, place
from .routing import overlap_stats, relay_routes, select_parallel_routes
from .tools import make_rng

logger = logging.getLogger(__name__)

FLOW_SCHEMES = ("lem", "lambda2", "maxflow")
ROUTING_SCHEMES = ("lem", "maxflow")
ROUTING_KS = (3, 4, 5)

BEAMFORMING_HEADER = [
    "seed",
    "replica",
    "M",
    "S_train",
    "snr_db",
    "mean_rate_gml",
    "mean_rate_genie",
    "mean_rate_mrt",
    "accuracy",
]


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    k: int
    scheme: str
    avg_flow: float
    lambda2: float


@dataclass(frozen=True)
class RouteRecord:
    """
    Parallel-route statistics of one placement. shared_nodes and
    shared_edges are NaN when fewer than two relay pairs are connected.
    """

    trial: int
    k: int
    scheme: str
    n_routes: int
    n_unreachable: int
    shared_nodes: float
    shared_edges: float


@dataclass(frozen=True)
class BeamformingRecord:
    seed: int
    replica: int
    n_antennas: int
    n_train: int
    snr_db: float
    mean_rate_gml: float
    mean_rate_genie: float
    mean_rate_mrt: float
    accuracy: float


def sample_deployment(config, rng):
    """
    Deployment drawn with the configured geometry
    """
    return Deployment.sample(
        rng,
        config.n_nodes,
        config.n_sites,
        config.radius,
        config.area,
        config.site_layout,
    )


def run_trials(trial_fn, config, n_trials, progress=False, description=None):
    """
    Run trial_fn(config, trial) for every trial and return the concatenated
    records in trial order

    Parameters
    ----------
    trial_fn : callable
        Returns a list of records

    config : ExperimentConfig
        config.n_jobs trials run concurrently (joblib)

    n_trials : int

    progress : bool
        Show a progress bar (tqdm)
    """
    trials = range(n_trials)
    if progress:
        trials = tqdm(trials, desc=description, total=n_trials)

    if config.n_jobs == 1:
        results = [trial_fn(config, trial) for trial in trials]
    else:
        results = Parallel(n_jobs=config.n_jobs)(
            delayed(trial_fn)(config, trial) for trial in trials
        )

    return [record for records in results for record in records]


def _prefix_placements(config, deployment, scheme):
    """
    (K, Placement) for K = 1..k_max
    """
    if config.k_max == 0:
        return []

    if config.search == "greedy":
        placement = place(
            deployment,
            scheme,
            config.k_max,
            config.gamma,
            config.relay_edge_model,
            fixed_destination=config.fixed_destination,
        )
        return [(k, placement.prefix(k)) for k in range(1, config.k_max + 1)]

    return [
        (
            k,
            place(
                deployment,
                scheme,
                k,
                config.gamma,
                config.relay_edge_model,
                search="exhaustive",
                budget=config.exhaustive_budget,
                fixed_destination=config.fixed_destination,
            ),
        )
        for k in range(1, config.k_max + 1)
    ]


def flow_trial(config, trial):
    """
    Average maximum flow and lambda_2 of K = 0..k_max relays placed by each
    scheme on one random deployment
    """
    rng = make_rng(config.seed, trial)
    deployment = sample_deployment(config, rng)
    baseline = build_disk_graph(deployment, config.relay_edge_model)

    baseline_flow = avg_max_flow(baseline, config.fixed_destination)
    baseline_lambda2 = baseline.algebraic_connectivity()

    records = []
    for scheme in FLOW_SCHEMES:
        records.append(TrialRecord(trial, 0, scheme, baseline_flow, baseline_lambda2))
        for k, placement in _prefix_placements(config, deployment, scheme):
            graph = occupy_relays(baseline, deployment, placement.occupied_sites)
            records.append(
                TrialRecord(
                    trial,
                    k,
                    scheme,
                    avg_max_flow(graph, config.fixed_destination),
                    graph.algebraic_connectivity(),
                )
            )

    return records


def run_flow_experiment(config, progress=False):
    """
    Flow and connectivity of the LEM, lambda_2 and max-flow placements

    Returns
    -------
    records : list of TrialRecord
        Ordered by trial, scheme, K
    """
    config.validate()
    logger.info("Flow experiment: %d trials, K = 0..%d", config.trials, config.k_max)
    return run_trials(flow_trial, config, config.trials, progress, "flow")


def distributed_trial(config, trial):
    """
    Centralized against distributed LEM placement on one random deployment
    """
    rng = make_rng(config.seed, trial)
    deployment = sample_deployment(config, rng)
    baseline = build_disk_graph(deployment, config.relay_edge_model)

    baseline_flow = avg_max_flow(baseline, config.fixed_destination)
    baseline_lambda2 = baseline.algebraic_connectivity()

    centralized = dict(_prefix_placements(config.replace(search="greedy"), deployment, "lem"))

    records = []
    for scheme in ("lem", "distributed-lem"):
        records.append(TrialRecord(trial, 0, scheme, baseline_flow, baseline_lambda2))
        for k in range(1, config.k_max + 1):
            if scheme == "lem":
                placement = centralized[k]
            else:
                placement = distributed_place(
                    deployment, k, config.gamma, config.relay_edge_model
                )
            graph = occupy_relays(baseline, deployment, placement.occupied_sites)
            records.append(
                TrialRecord(
                    trial,
                    k,
                    scheme,
                    avg_max_flow(graph, config.fixed_destination),
                    graph.algebraic_connectivity(),
                )
            )

    return records


def run_distributed_experiment(config, progress=False):
    """
    Returns
    -------
    records : list of TrialRecord
        Schemes "lem" and "distributed-lem", K = 0..k_max
    """
    config.validate()
    logger.info("Distributed experiment: %d trials, K = 0..%d", config.trials, config.k_max)
    return run_trials(distributed_trial, config, config.trials, progress, "distributed")


def routing_trial(config, trial):
    """
    Overlap of the selected parallel routes for K = 3, 4, 5 relays (those not
    above k_max) placed by LEM and max-flow. Relays are always graph vertices
    here, whatever config.relay_edge_model says.
    """
    config = config.replace(relay_edge_model="vertex")
    rng = make_rng(config.seed, trial)
    deployment = sample_deployment(config, rng)
    baseline = build_disk_graph(deployment, config.relay_edge_model)

    records = []
    for scheme in ROUTING_SCHEMES:
        placements = dict(_prefix_placements(config, deployment, scheme))
        for k in ROUTING_KS:
            if k not in placements:
                continue

            graph = occupy_relays(baseline, deployment, placements[k].occupied_sites)
            routes = relay_routes(graph, config.gamma)
            reachable = [route for route in routes if route.reachable]

            if len(reachable) >= 2:
                shared_nodes, shared_edges = overlap_stats(*select_parallel_routes(reachable))
            else:
                shared_nodes, shared_edges = math.nan, math.nan

            records.append(
                RouteRecord(
                    trial,
                    k,
                    scheme,
                    len(routes),
                    len(routes) - len(reachable),
                    float(shared_nodes),
                    float(shared_edges),
                )
            )

    return records


def run_routing_experiment(config, progress=False):
    """
    Returns
    -------
    records : list of RouteRecord
    """
    config.validate()
    if config.relay_edge_model != "vertex":
        logger.info("Routing places relays as graph vertices (relay_edge_model = vertex)")
    if config.k_max < min(ROUTING_KS):
        raise ConfigError(f"Routing needs k_max >= {min(ROUTING_KS)}, got {config.k_max}")

    logger.info("Routing experiment: %d trials", config.trials)
    return run_trials(routing_trial, config, config.trials, progress, "routes")


def beamforming_run(config, replica, n_antennas, n_train):
    """
    Train the geometric classifier and the codebook on n_train channels and
    evaluate them on fresh test channels

    Parameters
    ----------
    config : ExperimentConfig

    replica : int
        Seed replica, keys the random stream together with config.seed

    n_antennas : int
        M

    n_train : int
        S, split evenly between the users (user 2 takes the odd one)

    Returns
    -------
    record : BeamformingRecord
    """
    rng = make_rng(config.seed, replica, n_antennas, n_train)
    correlations = [
        exp_correlation(n_antennas, config.correlation_magnitude, phase)
        for phase in config.user_phases
    ]

    train_counts = (n_train // 2, n_train - n_train // 2)
    n_test = max(2, round(config.test_fraction * n_train))
    test_counts = (n_test // 2, n_test - n_test // 2)

    train = [sample_channels(q, rng, count) for q, count in zip(correlations, train_counts)]
    test = [sample_channels(q, rng, count) for q, count in zip(correlations, test_counts)]

    train_channels = np.vstack(train)
    train_labels = np.repeat([1, 2], train_counts)
    epsilon = channel_ridge(train_channels, config.epsilon_scale)

    classifier = train_classifier(
        [channel_spd(h, epsilon) for h in train_channels], train_labels, config.svm_reg
    )
    predicted = np.array([classifier.predict(channel_spd(h, epsilon)) for h in train_channels])

    grouped = {}
    for group in (1, 2):
        members = predicted == group
        if not members.any():
            logger.debug("Group %d is never predicted, using its true labels", group)
            members = train_labels == group
        grouped[group] = train_channels[members]

    codebook = build_codebook(
        grouped, n_antennas, config.snr, config.angle_grid_size, epsilon
    )

    rates, genie_rates, mrt_rates, correct = [], [], [], []
    for user, channels in zip((1, 2), test):
        for h in channels:
            group = classifier.predict(channel_spd(h, epsilon))
            genie = genie_rate(h, codebook, config.snr)
            rates.append(link_rate(h, codebook.codeword(group), config.snr))
            genie_rates.append(genie.rate)
            mrt_rates.append(genie.mrt_bound)
            correct.append(group == user)

    return BeamformingRecord(
        config.seed,
        replica,
        n_antennas,
        n_train,
        config.snr_db,
        float(np.mean(rates)),
        float(np.mean(genie_rates)),
        float(np.mean(mrt_rates)),
        float(np.mean(correct)),
    )


def beamforming_trial(config, replica):
    return [
        beamforming_run(config, replica, n_antennas, n_train)
        for n_antennas in config.antennas
        for n_train in config.train_sizes
    ]


def run_beamforming_experiment(config, progress=False):
    """
    Link rates of the learned codebook for every (replica, M, S)

    Returns
    -------
    records : list of BeamformingRecord
        Ordered by replica, M, S
    """
    config.validate()
    logger.info(
        "Beamforming experiment: %d seeds, M in %s, S in %s",
        config.trials,
        config.antennas,
        config.train_sizes,
    )
    return run_trials(beamforming_trial, config, config.trials, progress, "beamform")
