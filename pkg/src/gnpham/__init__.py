"""Hamiltonicity and perfect matchings in random graphs: exact oracles,
rotation-extension solvers, property checkers and Monte Carlo harness."""

from .graph import Graph, build_graph, read_edge_list, write_edge_list
from .matching import max_matching, solve_pm
from .posa import solve_hamilton
from .random_models import sample_gnp, sample_process
from .skeleton import regime_params

__all__ = [
    "Graph",
    "build_graph",
    "read_edge_list",
    "write_edge_list",
    "max_matching",
    "solve_pm",
    "solve_hamilton",
    "sample_gnp",
    "sample_process",
    "regime_params",
]
