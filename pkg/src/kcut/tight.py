"""Exact k-cut on a given spanning tree.

Tree edges are named by their child vertex and ordered by that id. A State
``(e, s)`` is the cheapest way to cut ``e`` together with ``s - 1`` edges
strictly below it; states are combined through minimum-weight triangles over
pairwise incomparable maximal edges.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from ._rng import derive_seed
from .graph import (
    CrossWeightTable,
    KCutError,
    KCutSolution,
    Partition,
    RootedSpanningTree,
    WeightedGraph,
    build_cross_table,
    build_graph,
    cut_weight,
    tree_cut_children,
)
from .triangle import TripartiteAux, cap_aux_weights, make_aux, min_weight_triangle

EXHAUSTIVE_GUESS_K = 7


def part_sizes(count: int) -> tuple[int, int, int]:
    """Split ``count`` maximal edges into three parts ``floor((count + i - 1) / 3)``."""
    return tuple((count + i) // 3 for i in range(3))  # type: ignore[return-value]


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` positive integers summing to ``total`` (lexicographic)."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class TreeContext:
    """Per-tree tables shared by the tight-tree solvers."""

    def __init__(self, G: WeightedGraph, T: RootedSpanningTree, cross: CrossWeightTable | None = None):
        if T.n != G.n:
            raise KCutError("tree and graph vertex counts differ")
        self.G = G
        self.T = T
        self.cross = cross if cross is not None else build_cross_table(G, T)
        n = T.n
        s = T.subtree_matrix().astype(bool)
        self.comparable = s | s.T
        if self.cross.pair_matrix is not None:
            pair = self.cross.pair_matrix.copy()
            esc = self.cross.escape_matrix
        else:
            pair = np.array([[self.cross.pairwise(u, v) for v in range(n)] for u in range(n)], dtype=np.int64)
            esc = np.array([[self.cross.escape(x, v) for v in range(n)] for x in range(n)], dtype=np.int64)
        pair[self.comparable] = 0
        self.pair = pair
        self.escape = esc
        self.boundary = np.asarray(self.cross.boundary, dtype=np.int64)
        self._families: dict[tuple[int, int], np.ndarray] = {}

    def below(self, e: int) -> list[int]:
        """Tree edges strictly below ``e`` (all edges when ``e`` is the root), sorted."""
        T = self.T
        return sorted(x for x in T.order[T.tin[e] + 1:T.tout[e]])

    def family(self, e: int, r: int) -> np.ndarray:
        """All pairwise incomparable ``r``-subsets below ``e`` as sorted rows."""
        key = (e, r)
        if key not in self._families:
            pool = self.below(e)
            comp = self.comparable
            rows: list[tuple[int, ...]] = []

            def extend(start: int, chosen: list[int]) -> None:
                if len(chosen) == r:
                    rows.append(tuple(chosen))
                    return
                for idx in range(start, len(pool)):
                    x = pool[idx]
                    if all(not comp[x, y] for y in chosen):
                        chosen.append(x)
                        extend(idx + 1, chosen)
                        chosen.pop()

            extend(0, [])
            self._families[key] = np.array(rows, dtype=np.int64).reshape(len(rows), r)
        return self._families[key]


def _pair_sum(pair: np.ndarray, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    out = np.zeros((xa.shape[0], xb.shape[0]), dtype=np.int64)
    for i in range(xa.shape[1]):
        for j in range(xb.shape[1]):
            out += pair[xa[:, i][:, None], xb[:, j][None, :]]
    return out


def _within(pair: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0], dtype=np.int64)
    for i in range(x.shape[1]):
        for j in range(i + 1, x.shape[1]):
            out += pair[x[:, i], x[:, j]]
    return out


def _compatible(comp: np.ndarray, xa: np.ndarray, xb: np.ndarray, ordered: bool) -> np.ndarray:
    ok = np.ones((xa.shape[0], xb.shape[0]), dtype=bool)
    for i in range(xa.shape[1]):
        for j in range(xb.shape[1]):
            ok &= ~comp[xa[:, i][:, None], xb[:, j][None, :]]
    if ordered and xa.shape[1] and xb.shape[1]:
        ok &= xa[:, -1][:, None] < xb[:, 0][None, :]
    return ok


def _assemble(parts, selfw, comp, pair, ordered: bool) -> TripartiteAux:
    x1, x2, x3 = parts
    s1, s2, s3 = selfw
    w12 = s1[:, None] - _pair_sum(pair, x1, x2)
    w23 = s2[:, None] - _pair_sum(pair, x2, x3)
    w31 = s3[:, None] - _pair_sum(pair, x3, x1)
    m12 = _compatible(comp, x1, x2, ordered)
    m23 = _compatible(comp, x2, x3, ordered)
    # part 1 precedes part 3 in the edge order, so test (x1, x3) and transpose
    m31 = _compatible(comp, x1, x3, ordered).T
    return make_aux(
        tuple([tuple(map(int, row)) for row in x] for x in parts), w12, w23, w31, m12, m23, m31
    )


def build_incomparable_aux(
    G: WeightedGraph, T: RootedSpanningTree, k: int, cross: CrossWeightTable | None = None,
    ctx: TreeContext | None = None,
) -> TripartiteAux:
    """Auxiliary graph whose triangles are incomparable (k-1)-edge deletions.

    Part ``a`` holds every incomparable set of ``r_a`` tree edges; an edge
    joins two nodes when their union stays incomparable, weighted by the
    boundary terms of the first node minus its internal and cross pairwise
    terms, so a triangle's weight is the cut weight of its union.
    """
    if k < 2:
        raise KCutError("k must be at least 2")
    ctx = ctx or TreeContext(G, T, cross)
    r = part_sizes(k - 1)
    parts = [ctx.family(T.root, ra) for ra in r]
    selfw = [ctx.boundary[x].sum(axis=1) - _within(ctx.pair, x) for x in parts]
    return _assemble(parts, selfw, ctx.comparable, ctx.pair, ordered=False)


def _triangle_union(H: TripartiteAux, tri: tuple[int, int, int]) -> list[int]:
    i, j, l = tri
    return sorted(H.parts[0][i] + H.parts[1][j] + H.parts[2][l])


def solve_incomparable(G: WeightedGraph, T: RootedSpanningTree, root: int | None = None, k: int = 2) -> KCutSolution | None:
    """Best k-cut among deletions of k-1 pairwise incomparable tree edges, or ``None``."""
    if root is not None and root != T.root:
        T = T.rerooted(root, G)
    if k == 1:
        return KCutSolution(Partition((0,) * G.n, 1), 0, "incomparable")
    H = build_incomparable_aux(G, T, k)
    res = min_weight_triangle(H)
    if res is None:
        return None
    tri, value = res
    P, actual = tree_cut_children(G, T, _triangle_union(H, tri))
    assert actual == value, "triangle weight must equal the cut weight"
    return KCutSolution(P, actual, "incomparable")


@dataclass
class StateTable:
    """Finite States only: ``values[(e, s)]`` and the winning child choices."""

    k: int
    values: dict[tuple[int, int], int] = field(default_factory=dict)
    choices: dict[tuple[int, int], tuple[tuple[int, int], ...]] = field(default_factory=dict)

    def __contains__(self, key) -> bool:
        return key in self.values

    def get(self, e: int, s: int) -> int | None:
        return self.values.get((e, s))

    def witness(self, e: int, s: int) -> frozenset[int]:
        """The ``s - 1`` edges below ``e`` cut together with ``e``."""
        out: set[int] = set()
        stack = list(self.choices[(e, s)])
        while stack:
            x, sx = stack.pop()
            out.add(x)
            stack.extend(self.choices[(x, sx)])
        return frozenset(out)


class _StateSolver:
    def __init__(self, ctx: TreeContext, k: int, seed: int, guess_rounds: int | None, cap: int | None):
        self.ctx = ctx
        self.k = k
        self.seed = seed
        self.guess_rounds = guess_rounds
        self.cap = cap
        n = ctx.T.n
        # state value matrix and finiteness flags, columns indexed by s
        self.val = np.zeros((n, k + 1), dtype=np.int64)
        self.fin = np.zeros((n, k + 1), dtype=bool)
        self.table = StateTable(k)

    def guesses(self, e: int, s: int) -> list[tuple[int, tuple[int, ...]]]:
        total = s - 1
        if self.guess_rounds is None:
            return [(l, sig) for l in range(1, total + 1) for sig in compositions(total, l)]
        seen: dict[tuple[int, tuple[int, ...]], None] = {}
        for rnd in range(self.guess_rounds):
            rng = random.Random(derive_seed(self.seed, e, s, rnd))
            l = rng.randint(1, total)
            cuts = sorted(rng.sample(range(1, total), l - 1))
            bounds = [0] + cuts + [total]
            sig = tuple(bounds[i + 1] - bounds[i] for i in range(l))
            seen.setdefault((l, sig), None)
        return list(seen)

    def best(self, e: int, s: int):
        """Minimum triangle over all guesses for State (e, s), without the boundary term."""
        ctx = self.ctx
        pool = ctx.below(e)
        best = None
        for l, sig in self.guesses(e, s):
            if l > len(pool):
                continue
            r = part_sizes(l)
            offsets = (0, r[0], r[0] + r[1])
            parts, selfw = [], []
            for a in range(3):
                fam = ctx.family(e, r[a])
                seg = sig[offsets[a]:offsets[a] + r[a]]
                ok = np.ones(fam.shape[0], dtype=bool)
                w = np.zeros(fam.shape[0], dtype=np.int64)
                for i, si in enumerate(seg):
                    ok &= self.fin[fam[:, i], si]
                    w += self.val[fam[:, i], si] - ctx.escape[fam[:, i], e]
                fam = fam[ok]
                parts.append(fam)
                selfw.append(w[ok] - _within(ctx.pair, fam))
            if any(p.shape[0] == 0 for p in parts):
                continue
            H = _assemble(parts, selfw, ctx.comparable, ctx.pair, ordered=True)
            if self.cap is not None:
                H = cap_aux_weights(H, self.cap)
            res = min_weight_triangle(H)
            if res is None:
                continue
            (i, j, q), value = res
            if best is None or value < best[0]:
                seq = H.parts[0][i] + H.parts[1][j] + H.parts[2][q]
                best = (value, tuple(zip(seq, sig)))
        return best

    def run(self) -> StateTable:
        ctx, k = self.ctx, self.k
        T = ctx.T
        for e in reversed(T.order):
            if e == T.root:
                continue
            for s in range(1, k):
                if s == 1:
                    value, choice = int(ctx.boundary[e]), ()
                else:
                    found = self.best(e, s)
                    if found is None:
                        continue
                    value, choice = int(ctx.boundary[e]) + found[0], found[1]
                if self.cap is not None and value > self.cap:
                    continue
                self.val[e, s] = value
                self.fin[e, s] = True
                self.table.values[(e, s)] = value
                self.table.choices[(e, s)] = choice
        return self.table


def compute_states(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    seed: int = 0,
    guess_rounds: int | None = None,
    cap: int | None = None,
    ctx: TreeContext | None = None,
) -> StateTable:
    """Bottom-up State table for sizes ``1..k-1``.

    With ``guess_rounds=None`` every ``(l, sigma)`` is tried; otherwise that
    many random draws are made per state (repeated draws are skipped). A
    ``cap`` drops auxiliary edges above it and discards states above it.
    """
    if k < 2:
        raise KCutError("k must be at least 2")
    ctx = ctx or TreeContext(G, T)
    return _StateSolver(ctx, k, seed, guess_rounds, cap).run()


def default_guess_rounds(n: int, k: int, cap: int = 2000) -> int:
    return min(cap, k ** k * math.ceil(math.log(max(n, 2))))


def solve_tight_tree(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    seed: int = 0,
    guess_rounds: int | None = None,
    cap: int | None = None,
    ctx: TreeContext | None = None,
) -> KCutSolution | None:
    """Minimum of ``w(Cut(F))`` over all ``k-1`` tree edges ``F``.

    The final triangle search runs over maximal edges below the root with
    State payloads. Guessing is exhaustive for ``k <= 7`` unless
    ``guess_rounds`` is given. Returns ``None`` only when a ``cap`` excludes
    every candidate.
    """
    if k < 1 or k > G.n:
        raise KCutError(f"k={k} must lie in 1..n={G.n}")
    if k == 1:
        return KCutSolution(Partition((0,) * G.n, 1), 0, "tight-tree", seed)
    if guess_rounds is None and k > EXHAUSTIVE_GUESS_K:
        guess_rounds = default_guess_rounds(G.n, k)
    ctx = ctx or TreeContext(G, T)
    solver = _StateSolver(ctx, k, seed, guess_rounds, cap)
    solver.run()
    found = solver.best(T.root, k)
    if found is None:
        return None
    value, choice = found
    cut: set[int] = set()
    for x, sx in choice:
        cut.add(x)
        cut |= solver.table.witness(x, sx)
    P, actual = tree_cut_children(G, T, cut)
    assert actual == value, "assembled value must equal the cut weight"
    return KCutSolution(P, actual, "tight-tree", seed, {"cut_children": tuple(sorted(cut))})


@dataclass(frozen=True)
class PeripheralGuess:
    """One guess of ``r`` tree edges and which ``r`` resulting components are final."""

    removed: tuple[int, ...]
    final_components: tuple[tuple[int, ...], ...]
    residual: tuple[int, ...]
    fixed_cost: int
    k_residual: int

    def residual_instance(self, G: WeightedGraph, T: RootedSpanningTree):
        """Residual graph and tree on ``residual`` (relabelled ``0..|C|-1``)."""
        index = {v: i for i, v in enumerate(self.residual)}
        edges = [(index[u], index[v], w) for u, v, w in G.edges if u in index and v in index]
        H = build_graph(len(index), edges)
        tedges = [(index[a], index[b]) for a, b in T.edge_pairs() if a in index and b in index]
        root = index.get(T.root, 0)
        return H, RootedSpanningTree.from_edges(len(index), tedges, root, H)


def guess_peripheral(G: WeightedGraph, T: RootedSpanningTree, k: int) -> Iterator[PeripheralGuess]:
    """All choices of ``r = (k-2) mod 3`` tree edges and ``r`` final components."""
    r = (k - 2) % 3
    if r == 0:
        yield PeripheralGuess((), (), tuple(range(G.n)), 0, k)
        return
    from .graph import components_after_cut

    for removed in combinations(sorted(T.tree_vertices()), r):
        labels = components_after_cut(T, removed)
        comps = [tuple(v for v in range(G.n) if labels[v] == c) for c in range(r + 1)]
        for rest in range(r + 1):
            finals = tuple(comps[c] for c in range(r + 1) if c != rest)
            fixed = sum(w for u, v, w in G.edges if labels[u] != labels[v])
            yield PeripheralGuess(removed, finals, comps[rest], fixed, k - r)


def solve_with_peripheral_guess(G: WeightedGraph, T: RootedSpanningTree, k: int) -> KCutSolution:
    """Best solution over all peripheral guesses, each residual solved exactly."""
    best = None
    for guess in guess_peripheral(G, T, k):
        if guess.k_residual > len(guess.residual):
            continue
        if guess.k_residual == 1:
            sub_labels, sub_value = [0] * len(guess.residual), 0
        else:
            H, TH = guess.residual_instance(G, T)
            sol = solve_tight_tree(H, TH, guess.k_residual)
            sub_labels, sub_value = list(sol.labels), sol.value
        total = guess.fixed_cost + sub_value
        if best is None or total < best[0]:
            labels = [0] * G.n
            for i, comp in enumerate(guess.final_components):
                for v in comp:
                    labels[v] = guess.k_residual + i
            for v, x in zip(guess.residual, sub_labels):
                labels[v] = x
            best = (total, labels)
    assert best is not None
    P = Partition.from_labels(best[1])
    value = cut_weight(G, P)
    assert value == best[0]
    return KCutSolution(P, value, "tight-tree-peripheral")
