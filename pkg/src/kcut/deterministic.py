"""Deterministic k-cut on a given tree.

The tree is first reduced to maximum degree 3 with Steiner vertices, its
edges are split into three forests by balanced separators, every forest is
cut and labelled in all small ways, and the three choices are combined by a
minimum-weight triangle search over label-set triples covering ``[k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .graph import (
    KCutError,
    KCutSolution,
    Partition,
    RootedSpanningTree,
    WeightedGraph,
    _DSU,
    make_solution,
)
from .packing import crossing_number, greedy_tree_packing

Edge = tuple[int, int]


def _norm(e: Sequence[int]) -> Edge:
    u, v = int(e[0]), int(e[1])
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class SteinerTree:
    """Degree-3 tree over ``original_n`` vertices plus Steiner vertices ``original_n..``."""

    tree: RootedSpanningTree
    original_n: int

    @property
    def steiner(self) -> frozenset[int]:
        return frozenset(range(self.original_n, self.tree.n))

    def is_steiner(self, v: int) -> bool:
        return v >= self.original_n

    def edges(self) -> list[Edge]:
        return self.tree.edge_pairs()

    def degree(self, v: int) -> int:
        return len(self.tree.children[v]) + (v != self.tree.root)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.tree.n)), default=0)

    def original_edge(self, c: int) -> Edge:
        """The edge of the reduced tree standing for original tree edge ``(parent(c), c)``."""
        if not 0 <= c < self.original_n or c == self.tree.root:
            raise KCutError(f"{c} does not name an original tree edge")
        return self.tree.edge_of(c)


def degree_reduce(T: RootedSpanningTree) -> SteinerTree:
    """Replace the children of every vertex with more than two by a binary tree.

    A vertex with ``z > 2`` children gets a single Steiner child that roots a
    full binary tree whose ``z`` leaves are the old children, adding ``z - 1``
    Steiner vertices. Cutting the edge above an old child separates the same
    original vertices as before.
    """
    edges: list[Edge] = []
    nxt = T.n

    def build(leaves: list[int]) -> int:
        nonlocal nxt
        if len(leaves) == 1:
            return leaves[0]
        s = nxt
        nxt += 1
        mid = (len(leaves) + 1) // 2
        for half in (leaves[:mid], leaves[mid:]):
            edges.append((s, build(half)))
        return s

    for v in range(T.n):
        ch = list(T.children[v])
        if len(ch) <= 2:
            edges.extend((v, c) for c in ch)
        else:
            edges.append((v, build(ch)))
    return SteinerTree(RootedSpanningTree.from_edges(nxt, edges, T.root), T.n)


def _tree_view(T) -> tuple[list[int], list[Edge]]:
    if isinstance(T, SteinerTree):
        T = T.tree
    if isinstance(T, RootedSpanningTree):
        return list(range(T.n)), T.edge_pairs()
    vertices, edges = T
    vertices, edges = sorted(vertices), sorted(_norm(e) for e in edges)
    known = set(vertices)
    if any(u not in known or v not in known for u, v in edges):
        raise KCutError("tree edges mention vertices outside the vertex list")
    return vertices, edges


def _adjacency(vertices: Iterable[int], edges: Iterable[Edge]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for a in adj.values():
        a.sort()
    return adj


def balanced_separator(T, F: Iterable[Sequence[int]], r: int, return_steps: bool = False):
    """Split a degree-3 tree into ``A, B`` with few crossing edges.

    ``T[A]`` holds at most ``r`` edges of ``F`` and ``T[B]`` at most
    ``|F| - r``. Each step peels a subtree holding more than half of the
    remaining budget, so there are at most ``log2(r + 1) + 1`` steps and one
    crossing edge per step. ``T`` may be a tree object or ``(vertices, edges)``.
    """
    vertices, edges = _tree_view(T)
    edge_set = set(edges)
    Fs = {_norm(e) for e in F}
    if not Fs <= edge_set:
        raise KCutError("F must be a subset of the tree edges")
    if not 1 <= r <= len(Fs) - 1:
        raise KCutError(f"r={r} must lie in 1..|F|-1={len(Fs) - 1}")
    adj = _adjacency(vertices, edges)
    if any(len(a) > 3 for a in adj.values()):
        raise KCutError("balanced_separator needs maximum degree 3")

    root = min(v for v in vertices if len(adj[v]) <= 1)
    alive = set(vertices)
    remaining = set(Fs)
    budget = r
    A: set[int] = set()
    steps = 0
    while True:
        steps += 1
        parent = {root: root}
        depth = {root: 0}
        order = [root]
        for x in order:
            for y in adj[x]:
                if y in alive and y not in parent:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    order.append(y)
        below = dict.fromkeys(order, 0)
        plus: dict[int, int] = {}
        for x in reversed(order):
            plus[x] = below[x] + (x != root and _norm((x, parent[x])) in remaining)
            if x != root:
                below[parent[x]] += plus[x]
        v = max((x for x in order if below[x] > budget), key=lambda x: (depth[x], -x))
        kids = sorted(y for y in adj[v] if y in alive and parent[y] == v and y != v)
        pick = next((u for u in kids if budget < 2 * plus[u] <= 2 * budget), None)
        if pick is None:
            pick = next(u for u in kids if plus[u] == budget + 1)
        piece = [pick]
        for x in piece:
            piece.extend(y for y in adj[x] if y in alive and parent.get(y) == x and y != x)
        A.update(piece)
        if plus[pick] >= budget:
            break
        budget -= plus[pick]
        alive.difference_update(piece)
        remaining -= {e for e in remaining if e[0] in A or e[1] in A}

    B = set(vertices) - A
    crossing = frozenset(e for e in edges if (e[0] in A) != (e[1] in A))
    out = (frozenset(A), frozenset(B), crossing)
    return out + (steps,) if return_steps else out


def separator_crossing_bound(r: int) -> int:
    return 2 * math.ceil(math.log2(r + 1)) + 2


@dataclass(frozen=True)
class Forest:
    vertices: frozenset[int]
    edges: frozenset[Edge]


def _induced_forest(vertices: Iterable[int], edges: Iterable[Edge]) -> Forest:
    vs = frozenset(vertices)
    return Forest(vs, frozenset(e for e in edges if e[0] in vs and e[1] in vs))


def _connect_components(vertices: set[int], edges: list[Edge]) -> list[Edge]:
    """Path of extra edges linking the components of a degree-3 forest, degree kept at most 3."""
    adj = _adjacency(vertices, edges)
    dsu = _DSU(max(vertices) + 1)
    for u, v in edges:
        dsu.union(u, v)
    comps: dict[int, list[int]] = {}
    for v in sorted(vertices):
        comps.setdefault(dsu.find(v), []).append(v)
    groups = sorted(comps.values())
    degree = {v: len(adj[v]) for v in vertices}

    def port(group: list[int]) -> int:
        v = next(x for x in group if degree[x] < 3)
        degree[v] += 1
        return v

    return [(port(a), port(b)) for a, b in zip(groups, groups[1:])]


def balanced_tripartition(T, F: Iterable[Sequence[int]]):
    """Three forests plus the crossing edges, each forest holding at most ``ceil(|F|/3)`` edges of ``F``.

    With ``|F| <= 1`` the first forest is the whole tree; with ``|F| == 2`` a
    single separation is used and the third forest is empty.
    """
    vertices, edges = _tree_view(T)
    Fs = {_norm(e) for e in F}
    if not Fs <= set(edges):
        raise KCutError("F must be a subset of the tree edges")
    if any(len(a) > 3 for a in _adjacency(vertices, edges).values()):
        raise KCutError("balanced_tripartition needs maximum degree 3")
    if len(Fs) <= 1:
        parts = [set(vertices), set(), set()]
    elif len(Fs) == 2:
        A, B, _ = balanced_separator((vertices, edges), Fs, 1)
        parts = [set(A), set(B), set()]
    else:
        r = math.ceil(len(Fs) / 3)
        A, B, _ = balanced_separator((vertices, edges), Fs, r)
        rest_edges = [e for e in edges if e[0] in B and e[1] in B]
        rest_F = Fs & set(rest_edges)
        if len(rest_F) <= r:
            parts = [set(A), set(B), set()]
        else:
            extra = _connect_components(set(B), rest_edges)
            A2, B2, _ = balanced_separator((B, rest_edges + extra), rest_F, r)
            parts = [set(A), set(A2), set(B2)]
    forests = tuple(_induced_forest(p, edges) for p in parts)
    inside = set().union(*(f.edges for f in forests))
    crossing = frozenset(e for e in edges if e not in inside)
    return forests[0], forests[1], forests[2], crossing


@dataclass(frozen=True)
class LabeledForestChoice:
    """One way to cut a forest and label its components.

    ``components`` are vertex tuples ordered by smallest vertex; ``labels``
    holds one label per component, ``None`` for components made only of
    Steiner vertices, which carry no partition meaning.
    """

    cut_edges: tuple[Edge, ...]
    components: tuple[tuple[int, ...], ...]
    labels: tuple[int | None, ...]
    normal_label_set: frozenset[int]

    def vertex_labels(self, original_n: int) -> dict[int, int]:
        out = {}
        for comp, lab in zip(self.components, self.labels):
            if lab is not None:
                for v in comp:
                    if v < original_n:
                        out[v] = lab
        return out

    def label_mask(self) -> int:
        return sum(1 << s for s in self.normal_label_set)


def _components(forest: Forest, cut: set[Edge]) -> tuple[tuple[int, ...], ...]:
    vs = sorted(forest.vertices)
    if not vs:
        return ()
    dsu = _DSU(vs[-1] + 1)
    for e in forest.edges:
        if e not in cut:
            dsu.union(*e)
    comps: dict[int, list[int]] = {}
    for v in vs:
        comps.setdefault(dsu.find(v), []).append(v)
    return tuple(sorted(tuple(c) for c in comps.values()))


def _rgs(length: int, k: int):
    def rec(prefix: list[int], top: int):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for lab in range(min(top + 1, k)):
            yield from rec(prefix + [lab], max(top, lab + 1))

    yield from rec([], 0)


def enumerate_forest_choices(
    G: WeightedGraph | int,
    forest: Forest,
    k: int,
    budget: int | None = None,
    candidates: Iterable[Sequence[int]] | None = None,
    distinct: bool = False,
    canonical: bool = False,
) -> list[LabeledForestChoice]:
    """All ways to cut at most ``budget`` forest edges and label the pieces with ``[k]``.

    Vertices ``>= original_n`` (``G.n`` or an int) are Steiner vertices.
    ``candidates`` restricts which edges may be cut. With ``distinct`` every
    cut edge must join two normal components with different labels; other
    choices repeat the vertex labelling of a choice with fewer cuts.
    ``canonical`` labels normal components by first appearance only.
    """
    original_n = G.n if isinstance(G, WeightedGraph) else int(G)
    if budget is None:
        budget = math.ceil(2 * k / 3)
    if budget < 0:
        raise KCutError("budget must be nonnegative")
    pool = sorted(forest.edges if candidates is None else {_norm(e) for e in candidates} & forest.edges)
    out = []
    for size in range(min(budget, len(pool)) + 1):
        for cut in combinations(pool, size):
            comps = _components(forest, set(cut))
            normal = [i for i, c in enumerate(comps) if c[0] < original_n]
            where = {v: i for i, c in enumerate(comps) for v in c}
            labelings = _rgs(len(normal), k) if canonical else product(range(k), repeat=len(normal))
            for labs in labelings:
                comp_label: list[int | None] = [None] * len(comps)
                for i, lab in zip(normal, labs):
                    comp_label[i] = lab
                if distinct and any(
                    comp_label[where[u]] is None
                    or comp_label[where[v]] is None
                    or comp_label[where[u]] == comp_label[where[v]]
                    for u, v in cut
                ):
                    continue
                out.append(LabeledForestChoice(cut, comps, tuple(comp_label), frozenset(labs)))
    return out


class _ForestTable:
    """Label matrix of all choices of one forest over its original vertices."""

    def __init__(self, choices: list[LabeledForestChoice], forest: Forest, original_n: int, k: int):
        self.choices = choices
        self.vertices = sorted(v for v in forest.vertices if v < original_n)
        col = {v: i for i, v in enumerate(self.vertices)}
        labels = np.zeros((len(choices), len(self.vertices)), dtype=np.int64)
        for r, ch in enumerate(choices):
            for v, lab in ch.vertex_labels(original_n).items():
                labels[r, col[v]] = lab
        self.labels = labels
        self.onehot = (labels[:, :, None] == np.arange(k)[None, None, :]).astype(np.float64)
        self.masks = np.array([ch.label_mask() for ch in choices], dtype=np.int64)


def _cross(A: np.ndarray, a: _ForestTable, b: _ForestTable) -> np.ndarray:
    """``out[x, y]``: weight between the two vertex sets whose labels differ."""
    sub = A[np.ix_(a.vertices, b.vertices)].astype(np.float64)
    total = sub.sum()
    same = np.zeros((len(a.choices), len(b.choices)))
    for c in range(a.onehot.shape[2]):
        same += a.onehot[:, :, c] @ sub @ b.onehot[:, :, c].T
    return np.rint(total - same).astype(np.int64)


def _within(A: np.ndarray, a: _ForestTable) -> np.ndarray:
    sub = A[np.ix_(a.vertices, a.vertices)].astype(np.float64)
    same = np.einsum("nic,ij,njc->n", a.onehot, sub, a.onehot)
    return np.rint((sub.sum() - same) / 2).astype(np.int64)


def tripartite_weights(G: WeightedGraph, tables: Sequence[_ForestTable]):
    """Edge weights ``(w12, w23, w31)`` of the auxiliary tripartite graph.

    A triangle sums, for its three choices, the cut edges inside each forest
    and between each pair of forests, which is the cut weight of the merged
    labelling.
    """
    A = G.matrix
    t1, t2, t3 = tables
    w12 = _within(A, t1)[:, None] + _cross(A, t1, t2)
    w23 = _within(A, t2)[:, None] + _cross(A, t2, t3)
    w31 = _within(A, t3)[:, None] + _cross(A, t3, t1)
    return w12, w23, w31


def _grouped_triangle(w12, w23, w31, masks, k: int):
    """Lexicographically first minimum triangle whose label sets cover ``[k]``."""
    full = (1 << k) - 1
    groups = []
    for m in masks:
        g: dict[int, np.ndarray] = {}
        for key in np.unique(m):
            g[int(key)] = np.flatnonzero(m == key)
        groups.append(g)
    best = None
    for m1, i1 in groups[0].items():
        for m2, i2 in groups[1].items():
            s12 = np.ascontiguousarray(w12[np.ix_(i1, i2)])
            for m3, i3 in groups[2].items():
                if m1 | m2 | m3 != full:
                    continue
                s23 = np.ascontiguousarray(w23[np.ix_(i2, i3)])
                s31 = np.ascontiguousarray(w31[np.ix_(i3, i1)])
                res = kernels.triangle_min(
                    s12, s23, s31,
                    np.ones(s12.shape, np.uint8), np.ones(s23.shape, np.uint8), np.ones(s31.shape, np.uint8),
                )
                if res is None:
                    continue
                value, a, b, c = res
                cand = (int(value), int(i1[a]), int(i2[b]), int(i3[c]))
                if best is None or cand < best:
                    best = cand
    return best


def default_separator_budget(k: int) -> int:
    return 2 * math.ceil(math.log2(k)) + 4 if k > 1 else 4


def _cover_family(ST: SteinerTree, pool: list[Edge], size: int, per_forest: int):
    """Tripartitions such that every ``size``-subset of ``pool`` puts at most ``per_forest`` edges in each forest."""
    family = []
    for F in combinations(pool, size):
        Fs = set(F)
        if any(all(len(Fs & f.edges) <= per_forest for f in tri[:3]) for tri in family):
            continue
        family.append(balanced_tripartition(ST, Fs))
    return family


def solve_deterministic(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    separator_budget: int | None = None,
    exhaustive: bool = False,
) -> KCutSolution | None:
    """Best k-cut among those crossing ``T`` at most ``2k - 2`` times.

    For every set ``F`` of ``min(2k-2, n-1)`` original tree edges the reduced
    tree is split by :func:`balanced_tripartition`, each forest is cut along
    subsets of ``F`` and labelled, and the cheapest triangle is kept. Any
    optimal cut crossing ``T`` at most ``2k - 2`` times cuts a subset of some
    such ``F``. With ``exhaustive`` a covering family of tripartitions is used
    instead and each forest may cut any ``ceil(2k/3)`` of its edges.
    """
    if T.n != G.n:
        raise KCutError("tree and graph vertex counts differ")
    if k < 1 or k > G.n:
        raise KCutError(f"k={k} must lie in 1..n={G.n}")
    if k == 1:
        return KCutSolution(Partition((0,) * G.n, 1), 0, "deterministic", None)
    budget = default_separator_budget(k) if separator_budget is None else separator_budget
    per_forest = math.ceil(2 * k / 3)
    ST = degree_reduce(T)
    pool = [ST.original_edge(c) for c in range(G.n) if c != T.root]
    size = min(2 * k - 2, len(pool))
    if exhaustive:
        jobs = [(tri, None) for tri in _cover_family(ST, pool, size, per_forest)]
    else:
        jobs = [(balanced_tripartition(ST, F), set(F)) for F in combinations(pool, size)]

    best = None
    skipped = 0
    for tri, F in jobs:
        forests, crossing = tri[:3], tri[3]
        if len(crossing) > budget:
            skipped += 1
            continue
        tables = []
        for i, forest in enumerate(forests):
            cand = None if F is None else F & forest.edges
            choices = enumerate_forest_choices(G, forest, k, per_forest, cand, distinct=True, canonical=i == 0)
            tables.append(_ForestTable(choices, forest, G.n, k))
        w12, w23, w31 = tripartite_weights(G, tables)
        found = _grouped_triangle(w12, w23, w31, [t.masks for t in tables], k)
        if found is None:
            continue
        value, x, y, z = found
        if best is None or value < best[0]:
            labels = [0] * G.n
            for t, idx in zip(tables, (x, y, z)):
                for v, lab in t.choices[idx].vertex_labels(G.n).items():
                    labels[v] = lab
            best = (value, labels)
    if best is None:
        return None
    sol = make_solution(G, best[1], "deterministic", None, tripartitions=len(jobs), skipped=skipped)
    assert sol.value == best[0]
    return sol


def solve_deterministic_full(G: WeightedGraph, k: int, tree_count: int | None = None) -> KCutSolution:
    """Minimum of :func:`solve_deterministic` over the distinct trees of a greedy packing."""
    from .pipeline import default_pipeline_tree_count

    if k < 1 or k > G.n:
        raise KCutError(f"k={k} must lie in 1..n={G.n}")
    packing = greedy_tree_packing(G, tree_count or default_pipeline_tree_count(G, k))
    best = None
    for i in packing.distinct():
        T = RootedSpanningTree.from_edge_ids(G, packing.tree_edge_ids[i])
        sol = solve_deterministic(G, T, k)
        if sol is not None and (best is None or sol.value < best.value):
            best = sol
    assert best is not None
    return best


def first_t_tree(G: WeightedGraph, P: Partition, k: int, tree_count: int | None = None) -> RootedSpanningTree | None:
    """First packed tree crossing ``P`` at most ``2k - 2`` times."""
    from .pipeline import cached_packing, default_pipeline_tree_count

    packing = cached_packing(G, tree_count or default_pipeline_tree_count(G, k))
    for i in packing.distinct():
        T = RootedSpanningTree.from_edge_ids(G, packing.tree_edge_ids[i])
        if crossing_number(T, P) <= 2 * k - 2:
            return T
    return None
