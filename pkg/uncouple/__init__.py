"""Near-uncoupledness: stochastic complements, uncoupling measure, Perron cluster, bounds."""

from .bounds import Lambda2BoundReport, SigmaBoundReport, lambda2_bound_check, sigma_bound_check
from .complement import StochasticComplement, interchanged_complement, stochastic_complement
from .measure import UncouplingReport, sigma_of, sigma_sweep, uncoupling_measure
from .perron import PerronCluster, perron_cluster

__all__ = [
    "Lambda2BoundReport",
    "PerronCluster",
    "SigmaBoundReport",
    "StochasticComplement",
    "UncouplingReport",
    "interchanged_complement",
    "lambda2_bound_check",
    "perron_cluster",
    "sigma_bound_check",
    "sigma_of",
    "sigma_sweep",
    "stochastic_complement",
    "uncoupling_measure",
]
