"""Graphs, partitions, rooted spanning trees and cut-weight accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Cut weights are accumulated in int64 inside numpy and the compiled kernels.
WEIGHT_LIMIT = 1 << 62
EAGER_PAIRWISE_LIMIT = 512


class KCutError(ValueError):
    """Base class for rejected inputs and violated preconditions."""


class GraphError(KCutError):
    """Malformed or disconnected graph."""


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True


@dataclass(frozen=True)
class WeightedGraph:
    """Connected undirected graph with positive integer weights.

    ``edges`` holds ``(u, v, w)`` with ``u < v``, sorted, one entry per vertex
    pair; the position of an edge in this tuple is its edge id.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    weight_bound: int

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per vertex, the tuple of ``(neighbour, weight, edge id)``."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v, w) in enumerate(self.edges):
            adj[u].append((v, w, eid))
            adj[v].append((u, w, eid))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense symmetric weight matrix (int64)."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, w in self.edges:
            a[u, v] = w
            a[v, u] = w
        a.setflags(write=False)
        return a

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        eu = np.array([e[0] for e in self.edges], dtype=np.int64)
        ev = np.array([e[1] for e in self.edges], dtype=np.int64)
        ew = np.array([e[2] for e in self.edges], dtype=np.int64)
        return eu, ev, ew

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(u, v): i for i, (u, v, _) in enumerate(self.edges)}

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def weight(self, u: int, v: int) -> int:
        """Weight of edge ``{u, v}`` or 0 when absent."""
        if u > v:
            u, v = v, u
        eid = self.edge_index.get((u, v))
        return 0 if eid is None else self.edges[eid][2]

    def weighted_degree(self, v: int) -> int:
        return sum(w for _, w, _ in self.adjacency[v])


def build_graph(n: int, edge_list: Iterable[Sequence[int]], weight_bound: int | None = None) -> WeightedGraph:
    """Validate and build a connected graph, merging parallel edges."""
    if n < 1:
        raise GraphError("graph needs at least one vertex")
    merged: dict[tuple[int, int], int] = {}
    for item in edge_list:
        if len(item) != 3:
            raise GraphError(f"edge {tuple(item)!r} is not a (u, v, w) triple")
        u, v, w = (int(x) for x in item)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if w < 1:
            raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
        key = (u, v) if u < v else (v, u)
        merged[key] = merged.get(key, 0) + w
    edges = tuple((u, v, w) for (u, v), w in sorted(merged.items()))
    total = sum(w for _, _, w in edges)
    if total >= WEIGHT_LIMIT:
        raise GraphError(f"total weight {total} overflows the 62-bit accumulator")
    dsu = _DSU(n)
    for u, v, _ in edges:
        dsu.union(u, v)
    reps = sorted({dsu.find(x) for x in range(n)})
    if len(reps) > 1:
        names = ", ".join(str(r) for r in reps)
        raise GraphError(f"graph is disconnected: {len(reps)} components, containing vertices {names}")
    wmax = max((w for _, _, w in edges), default=1)
    if weight_bound is None:
        weight_bound = wmax
    elif weight_bound < wmax:
        raise GraphError(f"weight_bound {weight_bound} is below the heaviest edge {wmax}")
    return WeightedGraph(n, edges, weight_bound)


@dataclass(frozen=True)
class Partition:
    """Labels ``0..k-1`` for every vertex, each label used at least once."""

    labels: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        labels = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        for x in labels:
            if not 0 <= x < self.k:
                raise KCutError(f"label {x} outside 0..{self.k - 1}")
        if len(set(labels)) != self.k:
            raise KCutError(f"partition uses {len(set(labels))} labels, expected k={self.k}")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        """Renumber arbitrary labels by order of first appearance."""
        mapping: dict[int, int] = {}
        out = []
        for x in labels:
            if x not in mapping:
                mapping[x] = len(mapping)
            out.append(mapping[x])
        return cls(tuple(out), len(mapping))

    def canonical(self) -> "Partition":
        return Partition.from_labels(self.labels)

    def parts(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, x in enumerate(self.labels):
            out[x].append(v)
        return out

    def same_as(self, other: "Partition") -> bool:
        """Equality up to renaming of labels."""
        return self.canonical().labels == other.canonical().labels


def cut_weight(G: WeightedGraph, P: Partition | Sequence[int]) -> int:
    """Total weight of edges whose endpoints carry different labels."""
    labels = P.labels if isinstance(P, Partition) else tuple(P)
    if len(labels) != G.n:
        raise KCutError(f"partition covers {len(labels)} vertices, graph has {G.n}")
    for x in labels:
        if x < 0:
            raise KCutError(f"label {x} out of range")
    return sum(w for u, v, w in G.edges if labels[u] != labels[v])


@dataclass(frozen=True, eq=False)
class RootedSpanningTree:
    """Rooted tree over vertices ``0..n-1``.

    Each non-root vertex ``c`` names the tree edge ``(parent[c], c)``; the
    subtree ``T_c`` below that edge is ``order[tin[c]:tout[c]]``, and ``u`` is
    an ancestor of ``x`` iff ``tin[u] <= tin[x] < tout[u]``.
    """

    root: int
    parent: tuple[int, ...]
    parent_edge_weight: tuple[int, ...]
    tin: tuple[int, ...]
    tout: tuple[int, ...]
    order: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def euler_intervals(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.tin, self.tout))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        root: int = 0,
        graph: WeightedGraph | None = None,
    ) -> "RootedSpanningTree":
        adj: list[list[int]] = [[] for _ in range(n)]
        count = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise KCutError(f"invalid tree edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != n - 1:
            raise KCutError(f"a spanning tree on {n} vertices needs {n - 1} edges, got {count}")
        for a in adj:
            a.sort()
        parent = [-1] * n
        parent[root] = root
        children: list[list[int]] = [[] for _ in range(n)]
        depth = [0] * n
        order: list[int] = []
        tin = [0] * n
        tout = [0] * n
        stack: list[tuple[int, int]] = [(root, 0)]
        while stack:
            x, state = stack.pop()
            if state == 0:
                tin[x] = len(order)
                order.append(x)
                stack.append((x, 1))
                for y in reversed(adj[x]):
                    if parent[y] == -1:
                        parent[y] = x
                        depth[y] = depth[x] + 1
                        children[x].append(y)
                        stack.append((y, 0))
                    elif y != parent[x]:
                        raise KCutError("tree edges contain a cycle")
            else:
                tout[x] = len(order)
        if len(order) != n:
            raise KCutError("tree edges do not span all vertices")
        for x in range(n):
            children[x].sort()
        pw = [0] * n
        if graph is not None:
            for x in range(n):
                if x != root:
                    pw[x] = graph.weight(parent[x], x)
        return cls(
            root,
            tuple(parent),
            tuple(pw),
            tuple(tin),
            tuple(tout),
            tuple(order),
            tuple(tuple(c) for c in children),
            tuple(depth),
        )

    @classmethod
    def from_edge_ids(cls, G: WeightedGraph, edge_ids: Iterable[int], root: int = 0) -> "RootedSpanningTree":
        return cls.from_edges(G.n, [G.edges[i][:2] for i in edge_ids], root, G)

    def is_ancestor(self, u: int, x: int) -> bool:
        """True when ``u`` is an ancestor of ``x`` (or equal)."""
        return self.tin[u] <= self.tin[x] < self.tout[u]

    def comparable(self, u: int, x: int) -> bool:
        return self.is_ancestor(u, x) or self.is_ancestor(x, u)

    def subtree(self, v: int) -> tuple[int, ...]:
        return self.order[self.tin[v]:self.tout[v]]

    def subtree_size(self, v: int) -> int:
        return self.tout[v] - self.tin[v]

    def tree_vertices(self) -> list[int]:
        """Child endpoints of all tree edges, i.e. every non-root vertex."""
        return [x for x in range(self.n) if x != self.root]

    def edge_of(self, c: int) -> tuple[int, int]:
        p = self.parent[c]
        return (p, c) if p < c else (c, p)

    def edge_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.edge_of(c) for c in self.tree_vertices())

    def key(self) -> tuple[tuple[int, int], ...]:
        """Root-independent identity of the tree: its sorted edge pairs."""
        return tuple(self.edge_pairs())

    def child_of_edge(self, edge: Sequence[int]) -> int:
        u, v = int(edge[0]), int(edge[1])
        if 0 <= u < self.n and 0 <= v < self.n:
            if self.parent[v] == u and v != self.root:
                return v
            if self.parent[u] == v and u != self.root:
                return u
        raise KCutError(f"({u}, {v}) is not an edge of the tree")

    def edge_ids(self, G: WeightedGraph) -> list[int]:
        return sorted(G.edge_index[e] for e in self.edge_pairs())

    def rerooted(self, root: int, graph: WeightedGraph | None = None) -> "RootedSpanningTree":
        return RootedSpanningTree.from_edges(self.n, self.edge_pairs(), root, graph)

    def incomparable(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if self.comparable(vs[i], vs[j]):
                    return False
        return True

    def subtree_matrix(self) -> np.ndarray:
        """``S[v, x] = 1`` iff ``x`` lies in ``T_v``."""
        n = self.n
        s = np.zeros((n, n), dtype=np.int64)
        order = self.order
        for v in range(n):
            s[v, list(order[self.tin[v]:self.tout[v]])] = 1
        return s


def components_after_cut(T: RootedSpanningTree, cut_children: Iterable[int]) -> list[int]:
    """Component id per vertex after deleting the given tree edges.

    Component ids are assigned in order of smallest contained vertex.
    """
    cut = set(cut_children)
    comp = [-1] * T.n
    raw = 0
    for x in T.order:
        if x == T.root or x in cut:
            comp[x] = raw
            raw += 1
        else:
            comp[x] = comp[T.parent[x]]
    return list(Partition.from_labels(comp).labels)


def tree_cut(G: WeightedGraph, T: RootedSpanningTree, F: Iterable[Sequence[int]]) -> tuple[Partition, int]:
    """Partition from deleting tree edges ``F`` and the weight of ``Cut(F)``."""
    children = {T.child_of_edge(e) for e in F}
    labels = components_after_cut(T, children)
    P = Partition(tuple(labels), len(children) + 1)
    return P, cut_weight(G, P)


def tree_cut_children(G: WeightedGraph, T: RootedSpanningTree, children: Iterable[int]) -> tuple[Partition, int]:
    """Like :func:`tree_cut` with edges given by their child vertices."""
    cs = set(children)
    if T.root in cs:
        raise KCutError("the root has no parent edge")
    labels = components_after_cut(T, cs)
    P = Partition(tuple(labels), len(cs) + 1)
    return P, cut_weight(G, P)


class CrossWeightTable:
    """``boundary(v) = w(E(T_v, V - T_v))`` and ``pairwise(u, v) = w(E(T_u, T_v))``.

    Also exposes ``escape(x, v) = w(E(T_x, V - T_v))`` for ``x`` inside
    ``T_v``, which the subtree dynamic programs need. Tables are computed
    eagerly with dense products when ``n`` is at most ``eager_limit`` and
    otherwise per query by an edge scan, memoized.
    """

    def __init__(self, G: WeightedGraph, T: RootedSpanningTree, eager_limit: int = EAGER_PAIRWISE_LIMIT):
        self.graph = G
        self.tree = T
        n = T.n
        self.eager = n <= eager_limit
        self._memo: dict[tuple[str, int, int], int] = {}
        if self.eager:
            a = np.zeros((n, n), dtype=np.int64)
            a[: G.n, : G.n] = G.matrix
            s = T.subtree_matrix()
            sa = s @ a
            self.pair_matrix = sa @ s.T
            self.escape_matrix = sa @ (1 - s).T
            self.boundary = np.diagonal(self.escape_matrix).copy()
        else:
            self.pair_matrix = None
            self.escape_matrix = None
            self.boundary = np.array([self._scan_escape(v, v) for v in range(n)], dtype=np.int64)

    def _inside(self, v: int, x: int) -> bool:
        return x < self.tree.n and self.tree.is_ancestor(v, x)

    def _scan_escape(self, x: int, v: int) -> int:
        total = 0
        for a, b, w in self.graph.edges:
            ia, ib = self._inside(x, a), self._inside(x, b)
            if ia and not self._inside(v, b):
                total += w
            if ib and not self._inside(v, a):
                total += w
        return total

    def pairwise(self, u: int, v: int) -> int:
        if self.pair_matrix is not None:
            return int(self.pair_matrix[u, v])
        key = ("p", min(u, v), max(u, v))
        if key not in self._memo:
            total = 0
            for a, b, w in self.graph.edges:
                if (self._inside(u, a) and self._inside(v, b)) or (self._inside(v, a) and self._inside(u, b)):
                    total += w
            self._memo[key] = total
        return self._memo[key]

    def escape(self, x: int, v: int) -> int:
        if self.escape_matrix is not None:
            return int(self.escape_matrix[x, v])
        key = ("e", x, v)
        if key not in self._memo:
            self._memo[key] = self._scan_escape(x, v)
        return self._memo[key]


def build_cross_table(G: WeightedGraph, T: RootedSpanningTree, eager_limit: int = EAGER_PAIRWISE_LIMIT) -> CrossWeightTable:
    return CrossWeightTable(G, T, eager_limit)


@dataclass(frozen=True)
class KCutSolution:
    """A k-partition with its crossing weight and how it was produced."""

    partition: Partition
    value: int
    algorithm: str
    seed: int | None = None
    info: dict = field(default_factory=dict, compare=False)

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def labels(self) -> tuple[int, ...]:
        return self.partition.labels

    @property
    def provenance(self) -> tuple[str, int | None]:
        return (self.algorithm, self.seed)

    def verify(self, G: WeightedGraph) -> bool:
        return cut_weight(G, self.partition) == self.value


def make_solution(G: WeightedGraph, labels: Sequence[int], algorithm: str, seed: int | None = None, **info) -> KCutSolution:
    P = Partition.from_labels(labels)
    return KCutSolution(P, cut_weight(G, P), algorithm, seed, dict(info))
