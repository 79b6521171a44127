"""
Experiment configuration
------------------------

Notes
-----
* Defaults reproduce the network simulation parameters: 6 x 6 area, disk
  radius 2, 20 nodes, 16 candidate sites
* Configuration files are flat `key = value` text; CLI flags override file
  values, file values override defaults
"""

import configparser
import dataclasses
from dataclasses import dataclass

import numpy as np


class ConfigError(ValueError):
    """Invalid or unsatisfiable experiment configuration"""


def _parse_bool(value):
    value = value.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: '{value}'")


def _parse_ints(value):
    return tuple(int(v) for v in value.split(",") if v.strip())


def _parse_floats(value):
    return tuple(eval_angle(v) for v in value.split(",") if v.strip())


def eval_angle(value):
    """
    Parse a float that may be written as a multiple of pi ("pi", "-pi",
    "0.5pi", "pi/2")
    """
    text = value.strip().lower().replace(" ", "").replace("*", "")
    if "pi" not in text:
        return float(text)

    factor, _, divisor = text.partition("pi")
    if factor in ("", "+"):
        factor = 1.0
    elif factor == "-":
        factor = -1.0
    else:
        factor = float(factor)
    divisor = float(divisor[1:]) if divisor.startswith("/") else 1.0
    if divisor == 0:
        raise ValueError(f"division by zero in '{value}'")

    return factor * np.pi / divisor


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Experiment configuration

    Attributes
    ----------
    width, height : float
        Deployment area

    radius : float
        Disk model radius R

    n_nodes : int
        n

    n_sites : int
        Z

    gamma : float
        Laplacian regularization

    k_max : int
        Largest number of relays (experiments sweep K = 0..k_max); the
        number of relays of a single placement

    trials : int
        Monte Carlo trials (network experiments) or seeds (beamforming)

    seed : int
        Master seed

    relay_edge_model : str
        "bridge" (default) or "vertex". The routing experiment always uses
        "vertex", its routes run through the relays.

    site_layout : str
        "grid" or "uniform"

    fixed_destination : bool
        Average flow towards one destination per source instead of all

    search : str
        "greedy" or "exhaustive"

    exhaustive_budget : int
        Largest C(Z, K) evaluated by exhaustive search

    scheme : str
        Placement objective of the `place` command

    snr_db : float

    antennas : tuple (int)
        M values

    train_sizes : tuple (int)
        S values

    correlation_magnitude : float
        |t| of both users

    user_phases : tuple (float)
        Phase of t for users 1 and 2 (radians)

    epsilon_scale : float
        Ridge of h h^H relative to the mean channel power

    svm_reg : float

    angle_grid_size : int

    test_fraction : float
        Test channels per training channel

    n_jobs : int
        Concurrent trials (joblib)
    """

    width: float = 6.0
    height: float = 6.0
    radius: float = 2.0
    n_nodes: int = 20
    n_sites: int = 16
    gamma: float = 0.5
    k_max: int = 5
    trials: int = 200
    seed: int = 2021
    relay_edge_model: str = "bridge"
    site_layout: str = "grid"
    fixed_destination: bool = False
    search: str = "greedy"
    exhaustive_budget: int = 100_000
    scheme: str = "lem"
    snr_db: float = 10.0
    antennas: tuple = (2, 4)
    train_sizes: tuple = (10, 20, 50, 100, 200)
    correlation_magnitude: float = 0.5
    user_phases: tuple = (np.pi, 0.0)
    epsilon_scale: float = 1e-3
    svm_reg: float = 1.0
    angle_grid_size: int = 181
    test_fraction: float = 0.4
    n_jobs: int = 1

    @property
    def area(self):
        return (self.width, self.height)

    @property
    def snr(self):
        """Linear SNR"""
        return 10 ** (self.snr_db / 10)

    def replace(self, **overrides):
        """
        Copy with the given fields replaced; None values are ignored so
        unset CLI flags keep the current value
        """
        overrides = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_file(cls, path, base=None):
        """
        Read a flat `key = value` file (comments start with #)
        """
        with open(path) as f:
            return cls.from_text(f.read(), base)

    @classmethod
    def from_text(cls, text, base=None):
        parser = configparser.ConfigParser(
            comment_prefixes=("#",), inline_comment_prefixes=("#",), delimiters=("=",)
        )
        parser.optionxform = str
        try:
            parser.read_string("[experiment]\n" + text)
        except configparser.Error as error:
            raise ConfigError(f"Malformed configuration: {error}") from error

        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for key, raw in parser["experiment"].items():
            if key not in types:
                raise ConfigError(f"Unknown configuration key '{key}'")
            try:
                values[key] = _parse_value(key, types[key], raw)
            except ValueError as error:
                raise ConfigError(f"Invalid value for '{key}': {error}") from error

        return (base or cls()).replace(**values)

    def validate(self):
        """
        Reject unsatisfiable configurations before any trial runs
        """
        checks = [
            (self.width > 0 and self.height > 0, "the area must have positive sides"),
            (self.radius > 0, "radius must be positive"),
            (self.n_nodes >= 2, "at least 2 nodes are required"),
            (self.n_sites >= 1, "at least 1 candidate site is required"),
            (self.gamma > 0, "gamma must be positive"),
            (self.k_max >= 0, "k_max must be non-negative"),
            (
                self.k_max < self.n_sites,
                f"k_max={self.k_max} relays need more candidate sites than Z={self.n_sites}",
            ),
            (self.trials >= 1, "at least one trial is required"),
            (self.relay_edge_model in ("vertex", "bridge"), "relay_edge_model is vertex or bridge"),
            (self.site_layout in ("grid", "uniform"), "site_layout is grid or uniform"),
            (self.search in ("greedy", "exhaustive"), "search is greedy or exhaustive"),
            (
                self.scheme in ("lem", "lambda2", "maxflow", "distributed-lem"),
                "scheme is lem, lambda2, maxflow or distributed-lem",
            ),
            (all(m >= 1 for m in self.antennas), "antenna counts must be positive"),
            (all(s >= 4 for s in self.train_sizes), "training sizes below 4 cannot be split"),
            (0 <= self.correlation_magnitude < 1, "correlation_magnitude must lie in [0, 1)"),
            (len(self.user_phases) == 2, "exactly two user phases are required"),
            (self.epsilon_scale > 0, "epsilon_scale must be positive"),
            (self.svm_reg > 0, "svm_reg must be positive"),
            (self.angle_grid_size >= 2, "angle_grid_size must be at least 2"),
            (0 < self.test_fraction, "test_fraction must be positive"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

        return self

    def print_parameters(self):
        """
        Print the configuration
        """
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, float):
                print("{0:>22s} : {1:>12.5g}".format(f.name, value))
            else:
                print("{0:>22s} : {1!s:>12}".format(f.name, value))


_PARSERS = {
    float: eval_angle,
    int: int,
    str: str.strip,
    bool: _parse_bool,
}

_TUPLE_PARSERS = {
    "antennas": _parse_ints,
    "train_sizes": _parse_ints,
    "user_phases": _parse_floats,
}


def _parse_value(key, field_type, raw):
    if field_type is tuple:
        return _TUPLE_PARSERS[key](raw)
    return _PARSERS[field_type](raw)
