from .deployment import Deployment
from .graph import Graph, build_disk_graph, occupy_relays
from .spd import SpdMatrix, LogMatrix, matrix_log, lem_distance, log_vectorize
from .flow import FlowResult, max_flow, avg_max_flow
from .objective import Objective, LogEuclidean, AlgebraicConnectivity, MaxFlow
from .placement import Placement, greedy_place, exhaustive_place, distributed_place, place
from .routing import Route, assign_clusters, shortest_route, relay_routes, select_parallel_routes
from .beamforming import (
    GeometricClassifier,
    Codebook,
    exp_correlation,
    build_codebook,
    link_rate,
    genie_rate,
)
from .config import ExperimentConfig, ConfigError
