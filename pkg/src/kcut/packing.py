"""Greedy spanning-tree packing and sampling of candidate trees."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .graph import KCutError, Partition, RootedSpanningTree, WeightedGraph, _DSU

PACKING_CAP = 5000


@dataclass(frozen=True, eq=False)
class TreePacking:
    """Trees packed in order; ``loads[e]`` counts the trees using edge ``e``."""

    graph: WeightedGraph
    trees: tuple[RootedSpanningTree, ...]
    tree_edge_ids: tuple[tuple[int, ...], ...]
    loads: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.trees)

    def distinct(self) -> list[int]:
        """Indices of the first occurrence of each distinct tree."""
        seen: set[tuple[int, ...]] = set()
        out = []
        for i, ids in enumerate(self.tree_edge_ids):
            if ids not in seen:
                seen.add(ids)
                out.append(i)
        return out


def greedy_tree_packing(G: WeightedGraph, tree_count: int, root: int = 0) -> TreePacking:
    """Repeatedly add a minimum spanning tree under loads ``uses(e) / w(e)``.

    Loads are compared exactly: with ``L`` the lcm of all weights, the load
    of ``e`` scaled by ``L`` is the integer ``uses(e) * (L // w(e))``. Ties go
    to the smaller edge id.
    """
    if tree_count < 1:
        raise KCutError("tree_count must be at least 1")
    weights = [w for _, _, w in G.edges]
    lcm = reduce(math.lcm, weights, 1)
    scale = [lcm // w for w in weights]
    uses = [0] * G.m
    trees = []
    ids_out = []
    for _ in range(tree_count):
        order = sorted(range(G.m), key=lambda e: (uses[e] * scale[e], e))
        dsu = _DSU(G.n)
        chosen = []
        for e in order:
            u, v, _ = G.edges[e]
            if dsu.union(u, v):
                chosen.append(e)
                if len(chosen) == G.n - 1:
                    break
        for e in chosen:
            uses[e] += 1
        ids = tuple(sorted(chosen))
        ids_out.append(ids)
        trees.append(RootedSpanningTree.from_edge_ids(G, ids, root))
    return TreePacking(G, tuple(trees), tuple(ids_out), tuple(uses))


def packing_size_formula(n: int, m: int, k: int, alpha: float | Fraction = Fraction(1, 8)) -> int:
    """Packing size ``ceil(3 m (k/alpha)^3 ln(n m k / alpha))``."""
    if k < 1:
        raise KCutError(f"k must be positive, got {k}")
    if not 0 < alpha < Fraction(9, 10):
        raise KCutError(f"alpha must lie in (0, 9/10), got {alpha}")
    if n < 1 or m < 1:
        raise KCutError("n and m must be positive")
    a = float(alpha)
    return math.ceil(3 * m * (k / a) ** 3 * math.log(n * m * k / a))


def default_tree_count(G: WeightedGraph, k: int, cap: int = PACKING_CAP) -> int:
    return min(cap, packing_size_formula(G.n, max(G.m, 1), k))


def crossing_number(T: RootedSpanningTree, P: Partition) -> int:
    """Number of tree edges whose endpoints lie in different parts."""
    labels = P.labels
    return sum(1 for c in T.tree_vertices() if labels[c] != labels[T.parent[c]])


def default_sample_count(n: int, k: int, multiplier: int = 4) -> int:
    return max(1, math.ceil(multiplier * k * math.log(max(n, 2))))


def sample_candidate_trees(packing: TreePacking, count: int, seed: int) -> list[RootedSpanningTree]:
    """Uniform sample of ``count`` packed trees without replacement."""
    if count < 0 or count > len(packing):
        raise KCutError(f"count must lie in 0..{len(packing)}, got {count}")
    idx = random.Random(seed).sample(range(len(packing)), count)
    return [packing.trees[i] for i in idx]


def sample_candidate_indices(packing: TreePacking, count: int, seed: int) -> list[int]:
    if count < 0 or count > len(packing):
        raise KCutError(f"count must lie in 0..{len(packing)}, got {count}")
    return random.Random(seed).sample(range(len(packing)), count)
