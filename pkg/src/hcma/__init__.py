"""Hamiltonian cycle search via HCP -> TSP reduction and a memetic algorithm."""

from .graph import Graph, parse_hcp, read_hcp, verify_hc
from .reduction import DistanceMatrix, sr_reduce, tc_reduce
from .solver import RunResult, SolverConfig, max_generations, solve

__all__ = [
    "Graph", "parse_hcp", "read_hcp", "verify_hc",
    "DistanceMatrix", "sr_reduce", "tc_reduce",
    "RunResult", "SolverConfig", "max_generations", "solve",
]
