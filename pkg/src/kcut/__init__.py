"""Minimum k-cut: exact tree-packing solvers, a deterministic variant and an
approximation scheme, with brute-force and classical baselines."""

from ._backend import BACKEND
from .approx import solve_ptas
from .baselines import brute_force_kcut, karger_stein, reduce_clique_to_kcut, sv_two_approx
from .deterministic import solve_deterministic, solve_deterministic_full
from .graph import (
    GraphError,
    KCutError,
    KCutSolution,
    Partition,
    RootedSpanningTree,
    WeightedGraph,
    build_graph,
    cut_weight,
)
from .io import ParseError, parse_instance, parse_text
from .packing import greedy_tree_packing
from .pipeline import solve_randomized
from .tight import solve_tight_tree

__all__ = [
    "BACKEND",
    "GraphError",
    "KCutError",
    "KCutSolution",
    "ParseError",
    "Partition",
    "RootedSpanningTree",
    "WeightedGraph",
    "brute_force_kcut",
    "build_graph",
    "cut_weight",
    "greedy_tree_packing",
    "karger_stein",
    "parse_instance",
    "parse_text",
    "reduce_clique_to_kcut",
    "solve_deterministic",
    "solve_deterministic_full",
    "solve_ptas",
    "solve_randomized",
    "solve_tight_tree",
    "sv_two_approx",
]
