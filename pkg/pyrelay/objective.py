"""
Placement objective classes
---------------------------

Notes
-----
* Every objective maps a candidate graph (baseline plus relays) to a scalar
  that the placement search maximizes
* The baseline is prepared once per search (Objective.baseline) and handed
  to every evaluation
"""

from .flow import avg_max_flow
from .spd import lem_distance


class Objective:
    """
    Subclass this to define a new placement objective. This class ensures
    that all objectives follow the same format.
    """

    name = None

    def baseline(self, graph):
        """
        Prepare whatever the objective compares against from the baseline
        (no relay) graph
        """
        return None

    def evaluate(self, graph, baseline):
        """
        Objective value of a candidate graph
        """
        raise NotImplementedError("This method must be implemented!")

    def __repr__(self):
        return f"{type(self).__name__}()"


class LogEuclidean(Objective):
    """
    Log-Euclidean distance between the regularized Laplacian of the candidate
    graph and that of the baseline network: D(S_P, S_b)
    """

    name = "lem"

    def __init__(self, gamma=0.5):
        """
        Parameters
        ----------
        gamma : float
            Laplacian regularization (default = 0.5)
        """
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        self.gamma = gamma

    def baseline(self, graph):
        return graph.regularized_laplacian(self.gamma)

    def evaluate(self, graph, baseline):
        return objective_lem(graph, baseline, self.gamma)

    def __repr__(self):
        return f"LogEuclidean(gamma={self.gamma})"


class AlgebraicConnectivity(Objective):
    """
    lambda_2 of the Laplacian restricted to the active vertices
    """

    name = "lambda2"

    def evaluate(self, graph, baseline):
        return graph.algebraic_connectivity(restrict_to_active=True)


class MaxFlow(Objective):
    """
    Network-average maximum flow rate f(P)
    """

    name = "maxflow"

    def __init__(self, fixed_destination=False):
        self.fixed_destination = fixed_destination

    def evaluate(self, graph, baseline):
        return avg_max_flow(graph, self.fixed_destination)

    def __repr__(self):
        return f"MaxFlow(fixed_destination={self.fixed_destination})"


OBJECTIVES = {
    LogEuclidean.name: LogEuclidean,
    AlgebraicConnectivity.name: AlgebraicConnectivity,
    MaxFlow.name: MaxFlow,
}


def objective_lem(graph, baseline, gamma=0.5):
    """
    LEM placement objective D(S_P, S_b)

    Parameters
    ----------
    graph : Graph
        Baseline graph with relays

    baseline : SpdMatrix
        Regularized Laplacian S_b of the no-relay network, same dimension

    gamma : float

    Returns
    -------
    value : float
    """
    s_p = graph.regularized_laplacian(gamma)
    if s_p.dim != baseline.dim:
        raise ValueError(f"Dimension mismatch: {s_p.dim} vs {baseline.dim}")

    return lem_distance(s_p, baseline)


def make_objective(objective, gamma=0.5, fixed_destination=False):
    """
    Build an objective from its name ("lem", "lambda2", "maxflow"); Objective
    instances are returned unchanged
    """
    if isinstance(objective, Objective):
        return objective

    if objective == LogEuclidean.name:
        return LogEuclidean(gamma)
    if objective == MaxFlow.name:
        return MaxFlow(fixed_destination)
    if objective == AlgebraicConnectivity.name:
        return AlgebraicConnectivity()

    raise ValueError(
        f"Unsupported objective '{objective}'. Use one of {', '.join(OBJECTIVES)}."
    )
