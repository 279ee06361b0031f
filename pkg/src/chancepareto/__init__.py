"""Pareto optimization for chance-constrained subset selection with Normal weights."""

from .chance import ConfidenceLevel, normal_isf, normal_quantile
from .engine import ALGORITHMS, AlgorithmConfig, RunRecord, run
from .estimators import ChanceParetoOptimizer, ExtremePointOracle
from .graph import Graph, load_edge_list
from .instance import StochasticInstance, generate_weights, load_instance
from .objectives import ConstraintFunction, Solution

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AlgorithmConfig",
    "ChanceParetoOptimizer",
    "ConfidenceLevel",
    "ConstraintFunction",
    "ExtremePointOracle",
    "Graph",
    "RunRecord",
    "Solution",
    "StochasticInstance",
    "generate_weights",
    "load_edge_list",
    "load_instance",
    "normal_isf",
    "normal_quantile",
    "run",
]
