"""Random edge-swap refinement of candidate trees towards tight trees."""

from __future__ import annotations

import numpy as np

from ._backend import kernels
from ._rng import derive_seed
from .graph import KCutError, Partition, RootedSpanningTree, WeightedGraph, _DSU


def _walk(G: WeightedGraph, edge_ids: list[int], length: int, seeds: list[int]) -> np.ndarray:
    eu, ev, ew = G.edge_arrays
    return kernels.refine_walks(
        G.n, eu, ev, ew, np.asarray(edge_ids, dtype=np.int64), length, np.asarray(seeds, dtype=np.uint64)
    )


def refine_iteration(G: WeightedGraph, T: RootedSpanningTree, seed: int) -> RootedSpanningTree:
    """One swap: drop a uniform tree edge, add a crossing edge drawn by weight."""
    if G.n < 2:
        return T
    ids = T.edge_ids(G)
    row = _walk(G, ids, 1, [derive_seed(seed, 0)])[0]
    return RootedSpanningTree.from_edge_ids(G, row.tolist(), T.root)


def refine_to_tight(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    budget_per_level: int,
    seed: int,
) -> list[RootedSpanningTree]:
    """Terminal trees of ``budget_per_level`` walks for each level ``l`` in ``[k-1, 2k-2]``.

    A level-``l`` walk has ``l - (k-1)`` steps and always starts from ``T``.
    Trees are deduplicated by edge set and reported in order of first
    appearance by (level, walk index).
    """
    return [
        RootedSpanningTree.from_edge_ids(G, ids, T.root)
        for ids in refine_to_tight_ids(G, T.edge_ids(G), k, budget_per_level, seed)
    ]


def refine_to_tight_ids(
    G: WeightedGraph, edge_ids: list[int], k: int, budget_per_level: int, seed: int
) -> list[tuple[int, ...]]:
    """Edge-id form of :func:`refine_to_tight`, avoiding tree construction."""
    if budget_per_level < 1:
        raise KCutError("budget_per_level must be at least 1")
    if k < 1:
        raise KCutError("k must be positive")
    seen: dict[tuple[int, ...], None] = {}
    base = tuple(sorted(edge_ids))
    for level in range(k - 1, 2 * k - 1):
        length = level - (k - 1)
        if length == 0 or G.n < 2:
            seen.setdefault(base, None)
            continue
        seeds = [derive_seed(seed, level, i) for i in range(budget_per_level)]
        for row in _walk(G, list(base), length, seeds).tolist():
            seen.setdefault(tuple(row), None)
    return list(seen)


def count_split_components(T: RootedSpanningTree, P: Partition) -> int:
    """Number of parts of ``P`` that induce two or more components in ``T``."""
    dsu = _DSU(T.n)
    labels = P.labels
    for c in T.tree_vertices():
        p = T.parent[c]
        if labels[c] == labels[p]:
            dsu.union(c, p)
    pieces: dict[int, set[int]] = {}
    for v in range(T.n):
        pieces.setdefault(labels[v], set()).add(dsu.find(v))
    return sum(1 for roots in pieces.values() if len(roots) >= 2)


def deletion_worthy_edges(T: RootedSpanningTree, P: Partition) -> list[int]:
    """Crossing tree edges below which exactly one part is split.

    Edge ``(parent(c), c)`` qualifies when it crosses ``P`` and, among the
    parts meeting ``T_c``, exactly one also meets ``V - T_c``. Returned as
    child vertices.
    """
    labels = P.labels
    out = []
    for c in T.tree_vertices():
        if labels[c] == labels[T.parent[c]]:
            continue
        inside = {labels[x] for x in T.subtree(c)}
        outside = {labels[x] for x in range(T.n) if not T.is_ancestor(c, x)}
        if len(inside & outside) == 1:
            out.append(c)
    return out
