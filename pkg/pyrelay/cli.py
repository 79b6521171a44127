"""
Command line interface
----------------------

    pyrelay flow | routes | distributed | beamform | place | demo [options]

Exit status is 0 on success, 2 for an invalid configuration and 1 for any
other input error.
"""

import argparse
import logging
import sys

import numpy as np

from .beamforming import build_codebook, exp_correlation, sample_channels
from .config import ConfigError, ExperimentConfig
from .deployment import Deployment
from .experiment import (
    BEAMFORMING_HEADER,
    run_beamforming_experiment,
    run_distributed_experiment,
    run_flow_experiment,
    run_routing_experiment,
    sample_deployment,
)
from .flow import avg_max_flow
from .graph import build_disk_graph, occupy_relays
from .placement import place, write_placement_csv
from .routing import relay_routes, select_parallel_routes, write_routes_csv
from .tools import make_rng, summarize, summary_path, write_csv, write_records, write_summary

logger = logging.getLogger("pyrelay")


def _int_list(text):
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument(
        "--out", help="output CSV (default: standard output, experiments print their summary)"
    )
    common.add_argument("--jobs", type=int, dest="n_jobs", help="concurrent trials")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    common.add_argument("--quiet", action="store_true", help="errors only, no progress bar")

    network = argparse.ArgumentParser(add_help=False)
    network.add_argument("--trials", type=int, help="Monte Carlo trials")
    network.add_argument("--k", type=int, dest="k_max", help="largest number of relays")

    parser = argparse.ArgumentParser(
        prog="pyrelay", description="Relay placement and relay beamforming experiments"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser(
        "flow", parents=[common, network], help="average max-flow and lambda_2 against K"
    )
    commands.add_parser(
        "routes", parents=[common, network], help="overlap of selected parallel routes"
    )
    commands.add_parser(
        "distributed", parents=[common, network], help="centralized against distributed LEM"
    )

    beamform = commands.add_parser(
        "beamform", parents=[common], help="rates of the learned beamforming codebook"
    )
    beamform.add_argument("--trials", type=int, help="seed replicas")
    beamform.add_argument("--snr-db", type=float, dest="snr_db")
    beamform.add_argument("--m", type=int, dest="n_antennas", help="number of antennas")
    beamform.add_argument("--train-sizes", type=_int_list, dest="train_sizes")

    single = commands.add_parser("place", parents=[common], help="place relays on one deployment")
    single.add_argument("--scheme", choices=["lem", "lambda2", "maxflow", "distributed-lem"])
    single.add_argument("--k", type=int, dest="k_max", help="number of relays")
    single.add_argument("--deployment", help="deployment file (default: a sampled deployment)")
    single.add_argument("--routes", help="also write the relay routes to this CSV")

    commands.add_parser("demo", parents=[common], help="small worked example")

    return parser


def configure_logging(verbose, quiet):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def build_config(args):
    """
    Defaults, then the configuration file, then command line flags
    """
    config = ExperimentConfig()
    if args.config:
        try:
            config = ExperimentConfig.from_file(args.config)
        except OSError as error:
            raise ConfigError(f"Cannot read configuration file: {error}") from error

    overrides = {
        name: getattr(args, name, None)
        for name in ("seed", "trials", "k_max", "n_jobs", "scheme", "snr_db", "train_sizes")
    }
    if getattr(args, "n_antennas", None) is not None:
        overrides["antennas"] = (args.n_antennas,)

    return config.replace(**overrides).validate()


def _write_results(records, out, header, by, metrics, by_labels=None):
    """
    Raw records to `out` plus the grouped summary to `<stem>_summary.csv`.
    Without `out` only the summary is printed, to standard output.
    """
    if out is None:
        write_csv(sys.stdout, *summarize(records, by, metrics, by_labels))
        return

    write_records(out, records, header)
    write_summary(summary_path(out), records, by, metrics, by_labels)

    logger.info("Wrote %s and %s", out, summary_path(out))


def command_flow(config, args):
    records = run_flow_experiment(config, progress=not args.quiet)
    _write_results(records, args.out, None, ("k", "scheme"), ("avg_flow", "lambda2"))


def command_distributed(config, args):
    records = run_distributed_experiment(config, progress=not args.quiet)
    _write_results(records, args.out, None, ("k", "scheme"), ("avg_flow", "lambda2"))


def command_routes(config, args):
    records = run_routing_experiment(config, progress=not args.quiet)
    _write_results(
        records,
        args.out,
        None,
        ("k", "scheme"),
        ("shared_nodes", "shared_edges", "n_unreachable"),
    )


def command_beamform(config, args):
    records = run_beamforming_experiment(config, progress=not args.quiet)
    _write_results(
        records,
        args.out,
        BEAMFORMING_HEADER,
        ("n_antennas", "n_train"),
        ("mean_rate_gml", "mean_rate_genie", "mean_rate_mrt", "accuracy"),
        by_labels=["M", "S_train"],
    )


def command_place(config, args):
    if args.deployment:
        deployment = Deployment.load(args.deployment)
    else:
        deployment = sample_deployment(config, make_rng(config.seed, 0))

    placement = place(
        deployment,
        config.scheme,
        config.k_max,
        config.gamma,
        config.relay_edge_model,
        config.search,
        config.exhaustive_budget,
        config.fixed_destination,
    )

    if args.out is None:
        write_placement_csv(placement, deployment, sys.stdout)
    else:
        with open(args.out, "w", newline="") as f:
            write_placement_csv(placement, deployment, f)

    if args.routes:
        # routes run through the relays
        graph = occupy_relays(
            build_disk_graph(deployment, "vertex"),
            deployment,
            placement.occupied_sites,
        )
        with open(args.routes, "w", newline="") as f:
            write_routes_csv(relay_routes(graph, config.gamma), f)


DEMO_NODES = [(0.5, 3.0), (1.5, 3.5), (1.5, 2.5), (4.5, 2.5), (4.5, 3.5), (5.5, 3.0)]
DEMO_SITES = [(3.0, 3.0), (3.0, 4.5), (3.0, 1.5), (0.5, 5.5)]


def command_demo(config, args):
    """
    Two clusters of nodes that only relays can join
    """
    deployment = Deployment(DEMO_NODES, DEMO_SITES, 2.0, (6.0, 6.0))
    baseline = build_disk_graph(deployment)
    print(deployment)
    print(
        f"No relays: average max-flow {avg_max_flow(baseline):.4f}, "
        f"lambda_2 {baseline.algebraic_connectivity():.4f}"
    )

    for scheme in ("lem", "lambda2", "maxflow", "distributed-lem"):
        placement = place(deployment, scheme, 2, config.gamma)
        graph = occupy_relays(baseline, deployment, placement.occupied_sites)
        print(
            f"{scheme:>16s}: sites {list(placement.occupied_sites)}, "
            f"average max-flow {avg_max_flow(graph):.4f}, "
            f"lambda_2 {graph.algebraic_connectivity():.4f}"
        )

    placement = place(deployment, "lem", 3, config.gamma)
    graph = occupy_relays(baseline, deployment, placement.occupied_sites)
    routes = relay_routes(graph, config.gamma)
    reachable = [route for route in routes if route.reachable]
    for route in routes:
        print(f"route {route.relay_a} -> {route.relay_b}: {list(route.path) or 'unreachable'}")
    if len(reachable) >= 2:
        first, second = select_parallel_routes(reachable)
        print(f"parallel routes: {list(first.path)} and {list(second.path)}")

    rng = make_rng(config.seed, 0)
    grouped = {
        group: sample_channels(exp_correlation(4, config.correlation_magnitude, phase), rng, 100)
        for group, phase in zip((1, 2), config.user_phases)
    }
    codebook = build_codebook(grouped, 4, config.snr, config.angle_grid_size)
    for group, theta in zip(codebook.groups, codebook.angles):
        print(f"codeword of group {group}: theta = {theta:.4f} ({np.degrees(theta):.1f} deg)")


COMMANDS = {
    "flow": command_flow,
    "routes": command_routes,
    "distributed": command_distributed,
    "beamform": command_beamform,
    "place": command_place,
    "demo": command_demo,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        config = build_config(args)
        if args.verbose:
            config.print_parameters()
        COMMANDS[args.command](config, args)
    except ConfigError as error:
        logger.error("Invalid configuration: %s", error)
        return 2
    except ValueError as error:
        logger.error("%s", error)
        return 1

    return 0
