"""End-to-end exact solvers built from packing, refinement and the tree solvers."""

from __future__ import annotations

import math
from functools import lru_cache

from ._rng import derive_seed
from .graph import KCutError, KCutSolution, Partition, RootedSpanningTree, WeightedGraph
from .packing import (
    PACKING_CAP,
    TreePacking,
    default_sample_count,
    greedy_tree_packing,
    packing_size_formula,
    sample_candidate_indices,
)
from .refine import refine_to_tight_ids
from .tight import solve_tight_tree

PACKING_PER_EDGE = 40


def default_pipeline_tree_count(G: WeightedGraph, k: int) -> int:
    """Packing size used by the pipelines: the formula value capped at ``40 m`` and 5000."""
    formula = packing_size_formula(G.n, max(G.m, 1), k)
    return max(1, min(formula, PACKING_PER_EDGE * max(G.m, 1), PACKING_CAP))


def default_refine_budget(n: int, k: int) -> int:
    return 1


@lru_cache(maxsize=256)
def cached_packing(G: WeightedGraph, tree_count: int) -> TreePacking:
    return greedy_tree_packing(G, tree_count)


def candidate_tree_ids(
    G: WeightedGraph,
    k: int,
    seed: int,
    tree_count: int | None = None,
    sample_count: int | None = None,
    refine_budget: int | None = None,
) -> list[tuple[int, ...]]:
    """Distinct candidate trees (as edge-id tuples) for one seeded run.

    Samples ``sample_count`` packed trees and refines each distinct one with
    ``refine_budget`` walks per level.
    """
    tree_count = tree_count or default_pipeline_tree_count(G, k)
    packing = cached_packing(G, tree_count)
    count = min(len(packing), sample_count or default_sample_count(G.n, k))
    budget = refine_budget or default_refine_budget(G.n, k)
    picked: dict[tuple[int, ...], None] = {}
    for i in sample_candidate_indices(packing, count, derive_seed(seed, 1)):
        picked.setdefault(packing.tree_edge_ids[i], None)
    out: dict[tuple[int, ...], None] = {}
    for j, ids in enumerate(picked):
        for cand in refine_to_tight_ids(G, list(ids), k, budget, derive_seed(seed, 2, j)):
            out.setdefault(cand, None)
    return list(out)


def solve_randomized(
    G: WeightedGraph,
    k: int,
    seed: int = 0,
    tree_count: int | None = None,
    sample_count: int | None = None,
    refine_budget: int | None = None,
    guess_rounds: int | None = None,
    cache: dict | None = None,
) -> KCutSolution:
    """Packing, sampling, refinement, then the tight-tree solver on every candidate.

    ``cache`` may map ``(edge ids, k)`` to earlier tight-tree results; those
    are deterministic (exhaustive guessing for ``k <= 7``), so sharing a
    cache across seeds changes nothing but the running time.
    """
    if k < 1 or k > G.n:
        raise KCutError(f"k={k} must lie in 1..n={G.n}")
    if k == 1 or G.n == 1:
        return KCutSolution(Partition((0,) * G.n, 1), 0, "randomized", seed)
    cands = candidate_tree_ids(G, k, seed, tree_count, sample_count, refine_budget)
    memo = cache if cache is not None else {}
    best = None
    for ids in cands:
        key = (ids, k, guess_rounds)
        if key not in memo:
            T = RootedSpanningTree.from_edge_ids(G, ids)
            sol = solve_tight_tree(G, T, k, seed=derive_seed(seed, 3), guess_rounds=guess_rounds)
            memo[key] = (sol.value, sol.labels)
        value, labels = memo[key]
        if best is None or value < best[0]:
            best = (value, labels)
    assert best is not None
    P = Partition.from_labels(best[1])
    return KCutSolution(P, best[0], "randomized", seed, {"candidates": len(cands)})
