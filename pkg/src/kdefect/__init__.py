"""Exact maximum k-defective clique solver (decompose-and-branch)."""

from .bounds import BOUND_NAMES, Partition, build_conflicts, greedy_partition, make_bound
from .graph import Graph, degeneracy_order, load_graph, parse_graph, serialize_graph
from .model import Instance, Solution, check_solution, is_k_defective_clique, is_k_defective_set
from .solver import SolveReport, heuristic_initial, solve

__all__ = [
    "BOUND_NAMES", "Graph", "Instance", "Partition", "Solution", "SolveReport",
    "build_conflicts", "check_solution", "degeneracy_order", "greedy_partition",
    "heuristic_initial", "is_k_defective_clique", "is_k_defective_set", "load_graph",
    "make_bound", "parse_graph", "serialize_graph", "solve",
]
