"""Independent brute-force oracles shared by the unit and acceptance tests."""

from __future__ import annotations

import random
from itertools import combinations, permutations

from kcut.graph import RootedSpanningTree, WeightedGraph, tree_cut_children
from kcut.tight import part_sizes


def random_spanning_tree(G: WeightedGraph, rng: random.Random, root: int = 0) -> RootedSpanningTree:
    """Kruskal over a shuffled edge list."""
    edges = list(G.edges)
    rng.shuffle(edges)
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v, _ in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            chosen.append((u, v))
    return RootedSpanningTree.from_edges(G.n, chosen, root, G)


def random_incomparable_set(T: RootedSpanningTree, size: int, rng: random.Random) -> list[int] | None:
    """A random set of pairwise incomparable tree edges (child vertices), or None."""
    pool = T.tree_vertices()
    for _ in range(50):
        rng.shuffle(pool)
        chosen: list[int] = []
        for x in pool:
            if all(not T.comparable(x, y) for y in chosen):
                chosen.append(x)
                if len(chosen) == size:
                    return sorted(chosen)
    return None


def triangle_weights_for_set(H, S) -> list[int]:
    """Weights of every triangle of ``H`` whose payload union is exactly ``S``."""
    index = [{tuple(sorted(p)): i for i, p in enumerate(part)} for part in H.parts]
    r = part_sizes(len(S))
    found = []
    for perm in set(permutations(S)):
        pieces = (perm[: r[0]], perm[r[0]: r[0] + r[1]], perm[r[0] + r[1]:])
        try:
            i, j, l = (index[a][tuple(sorted(p))] for a, p in enumerate(pieces))
        except KeyError:
            continue
        w = H.weight(i, j, l)
        if w is not None:
            found.append(w)
    return found


def state_oracle(G: WeightedGraph, T: RootedSpanningTree, e: int, s: int) -> int | None:
    """min over (s-1)-subsets F of edges strictly below e of w(Cut({e} + F))."""
    below = [x for x in T.subtree(e) if x != e]
    best = None
    for F in combinations(below, s - 1):
        value = tree_cut_children(G, T, (e,) + F)[1]
        best = value if best is None else min(best, value)
    return best


def tight_oracle(G: WeightedGraph, T: RootedSpanningTree, k: int) -> int:
    """min over all (k-1)-subsets of tree edges of the induced cut."""
    return min(tree_cut_children(G, T, F)[1] for F in combinations(T.tree_vertices(), k - 1))


def tight_tree_for(G: WeightedGraph, labels, root: int = 0) -> RootedSpanningTree:
    """Spanning tree crossing the partition ``labels`` exactly k-1 times.

    Edges inside parts are taken first (Kruskal order), then crossing edges,
    which works whenever every part is connected, as in any optimal k-cut.
    """
    inside = [(u, v) for u, v, _ in G.edges if labels[u] == labels[v]]
    across = [(u, v) for u, v, _ in G.edges if labels[u] != labels[v]]
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v in inside + across:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            chosen.append((u, v))
    return RootedSpanningTree.from_edges(G.n, chosen, root, G)
