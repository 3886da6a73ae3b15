"""Solvers and benchmark tools for the resource constrained shortest path problem."""

from .baseline import BaselineResult, SearchConfig, solve_rcbda
from .bounds import InitResult, initialize, one_to_all_bound
from .enhanced import EnhancedResult, SolutionSet, reconstruct_paths, solve_rcebda
from .graph import (
    Direction,
    GraphFormatError,
    MultiCostGraph,
    ProblemInstance,
    TightnessSpec,
    build_scenario_graph,
    compute_budget,
    load_dimacs_gr,
    load_edge_list,
)
from .oracle import enumerate_feasible, oracle_answer
from .parallel import solve_parallel
from .status import SolveStatus
from .vectors import INF, add, dominates, truncated_dominates

__all__ = [
    "BaselineResult",
    "Direction",
    "EnhancedResult",
    "GraphFormatError",
    "INF",
    "InitResult",
    "MultiCostGraph",
    "ProblemInstance",
    "SearchConfig",
    "SolutionSet",
    "SolveStatus",
    "TightnessSpec",
    "add",
    "build_scenario_graph",
    "compute_budget",
    "dominates",
    "enumerate_feasible",
    "initialize",
    "load_dimacs_gr",
    "load_edge_list",
    "one_to_all_bound",
    "oracle_answer",
    "reconstruct_paths",
    "solve_parallel",
    "solve_rcbda",
    "solve_rcebda",
    "truncated_dominates",
]

__version__ = "0.1.0"
