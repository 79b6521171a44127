import numpy as np
import pytest

from pyrelay.deployment import Deployment


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run Monte Carlo acceptance tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo test, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_clusters():
    """
    Two groups of three nodes 3 apart with candidate sites in the gap
    """
    nodes = [(0.5, 3.0), (1.5, 3.5), (1.5, 2.5), (4.5, 2.5), (4.5, 3.5), (5.5, 3.0)]
    sites = [(3.0, 3.0), (3.0, 4.5), (3.0, 1.5), (0.5, 5.5)]
    return Deployment(nodes, sites, 2.0)
