"""Reference solvers: brute force, random contraction, Stoer-Wagner, greedy splitting,
and the clique reduction used to generate adversarial instances."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from ._rng import derive_seed
from .graph import (
    KCutError,
    KCutSolution,
    Partition,
    WeightedGraph,
    build_graph,
    cut_weight,
    make_solution,
)

BRUTE_FORCE_CAP = 14
KARGER_REPETITION_CAP = 100_000


def _check_k(G: WeightedGraph, k: int) -> None:
    if k < 1:
        raise KCutError(f"k must be at least 1, got {k}")
    if k > G.n:
        raise KCutError(f"k={k} exceeds the vertex count n={G.n}")


def brute_force_kcut(G: WeightedGraph, k: int, cap: int = BRUTE_FORCE_CAP) -> KCutSolution:
    """Exact minimum k-cut over all partitions into k nonempty parts."""
    _check_k(G, k)
    if G.n > cap:
        raise KCutError(f"brute force is capped at n <= {cap} (got n={G.n})")
    value, labels = kernels.rgs_min_kcut(G.matrix, k)
    sol = make_solution(G, labels, "brute")
    assert sol.value == value
    return sol


def karger_repetitions(n: int, k: int, cap: int = KARGER_REPETITION_CAP) -> int:
    """Default repetition count ``ceil(n^(2k) ln n)``, capped."""
    if n < 2:
        return 1
    exponent = 2 * k * math.log(n) + math.log(math.log(n))
    if exponent > math.log(cap):
        return cap
    return max(1, min(cap, math.ceil(n ** (2 * k) * math.log(n))))


def karger_stein(G: WeightedGraph, k: int, seed: int = 0, repetitions: int | None = None) -> KCutSolution:
    """Best of repeated flat contractions, sampling edges proportionally to weight.

    Repetition ``i`` uses the derived seed ``derive_seed(seed, i)``.
    """
    _check_k(G, k)
    if repetitions is None:
        repetitions = karger_repetitions(G.n, k)
    if repetitions < 1:
        raise KCutError("repetitions must be at least 1")
    if k == G.n or G.m == 0:
        return make_solution(G, list(range(G.n)) if k == G.n else [0] * G.n, "karger-stein", seed)
    seeds = np.array([derive_seed(seed, i) for i in range(repetitions)], dtype=np.uint64)
    eu, ev, ew = G.edge_arrays
    value, roots, rep = kernels.karger_batch(G.n, eu, ev, ew, k, seeds)
    sol = make_solution(G, roots, "karger-stein", seed, repetitions=repetitions, best_repetition=rep)
    assert sol.value == value
    return sol


def _induced(G: WeightedGraph, vertices: Sequence[int]) -> np.ndarray:
    idx = np.asarray(vertices, dtype=np.int64)
    return np.ascontiguousarray(G.matrix[np.ix_(idx, idx)])


def global_min_cut(G: WeightedGraph) -> tuple[Partition, int]:
    """Exact minimum 2-cut by Stoer-Wagner (maximum adjacency orderings)."""
    if G.n < 2:
        raise KCutError("a global min cut needs at least two vertices")
    value, side = kernels.stoer_wagner(G.matrix)
    inside = set(side)
    P = Partition.from_labels([1 if v in inside else 0 for v in range(G.n)])
    assert cut_weight(G, P) == value
    return P, value


def sv_two_approx(G: WeightedGraph, k: int) -> KCutSolution:
    """Greedy splitting: repeatedly apply the cheapest min cut of any current component.

    Components are indexed by their smallest vertex; ties go to the smaller
    index. The result is within a factor ``2 - 2/k`` of optimal.
    """
    _check_k(G, k)
    comps: list[list[int]] = [list(range(G.n))]
    cache: dict[tuple[int, ...], tuple[int, list[int]]] = {}
    while len(comps) < k:
        best = None
        for idx, comp in enumerate(comps):
            if len(comp) < 2:
                continue
            key = tuple(comp)
            if key not in cache:
                value, side = kernels.stoer_wagner(_induced(G, comp))
                cache[key] = (value, [comp[i] for i in side])
            value, side = cache[key]
            if best is None or value < best[0]:
                best = (value, idx, side)
        assert best is not None, "k <= n guarantees a splittable component"
        _, idx, side = best
        comp = comps.pop(idx)
        inside = set(side)
        a = [v for v in comp if v in inside]
        b = [v for v in comp if v not in inside]
        comps.extend([a, b])
        comps.sort(key=lambda c: c[0])
    labels = [0] * G.n
    for i, comp in enumerate(comps):
        for v in comp:
            labels[v] = i
    return make_solution(G, labels, "sv2")


def reduce_clique_to_kcut(n: int, h_edges: Iterable[Sequence[int]], k: int) -> tuple[WeightedGraph, int]:
    """Clique instance ``H`` to a weighted (k+1)-cut instance.

    Adds an apex ``s = n`` joined to every ``v`` with weight ``n^2 - deg_H(v)``;
    edges of ``H`` keep weight 1. Returns the graph and the target part count.
    """
    if k < 1 or n < k:
        raise KCutError(f"need 1 <= k <= n, got k={k}, n={n}")
    simple = set()
    for e in h_edges:
        u, v = int(e[0]), int(e[1])
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise KCutError(f"H must be simple on 0..{n - 1}; bad edge ({u}, {v})")
        simple.add((min(u, v), max(u, v)))
    deg = [0] * n
    for u, v in simple:
        deg[u] += 1
        deg[v] += 1
    if n * n <= max(deg, default=0):
        raise KCutError("apex weights would not be positive")
    edges = [(u, v, 1) for u, v in sorted(simple)]
    edges += [(v, n, n * n - deg[v]) for v in range(n)]
    return build_graph(n + 1, edges), k + 1


def extract_clique(G_reduced: WeightedGraph, solution: KCutSolution, k: int) -> tuple[int, ...] | None:
    """Read a k-clique of ``H`` off an optimal (k+1)-cut of the reduced graph.

    Returns the sorted k vertices when the non-apex parts are singletons that
    are pairwise adjacent in ``H``, otherwise ``None``.
    """
    apex = G_reduced.n - 1
    P = solution.partition
    if len(P.labels) != G_reduced.n or P.k != k + 1:
        raise KCutError(f"expected a {k + 1}-partition of {G_reduced.n} vertices")
    parts = P.parts()
    others = [p for p in parts if apex not in p]
    if len(others) != k or any(len(p) != 1 for p in others):
        raise KCutError("an optimal reduced cut isolates exactly k single vertices")
    chosen = tuple(sorted(p[0] for p in others))
    for u, v in combinations(chosen, 2):
        if G_reduced.weight(u, v) != 1:
            return None
    return chosen


def has_clique(n: int, h_edges: Iterable[Sequence[int]], k: int) -> bool:
    """Exhaustive k-clique search (the independent oracle for the reduction)."""
    adj = [set() for _ in range(n)]
    for u, v in h_edges:
        adj[u].add(v)
        adj[v].add(u)
    for combo in combinations(range(n), k):
        if all(b in adj[a] for a, b in combinations(combo, 2)):
            return True
    return False
