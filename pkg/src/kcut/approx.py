"""(1 + eps)-approximate k-cut on tight trees.

Vertex sets are bit masks over the (contracted) vertex ids. A state
``(v, s, U)`` cuts ``s`` parent edges inside ``T_v`` whose topmost vertices
are ``U``; the compressed tables replace ``U`` by its representative, the
important nodes covered by ``T_U``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._rng import derive_seed
from .baselines import sv_two_approx
from .graph import (
    KCutError,
    KCutSolution,
    Partition,
    RootedSpanningTree,
    WeightedGraph,
    _DSU,
    build_graph,
    cut_weight,
    make_solution,
)

EXACT_DP_CAP = 12
REPRESENTATIVE_CAP = 14
PVC_EXACT_CAP = 20
GUESS_LIMIT = 100_000
PVC_ROUND_CAP = 1_000_000

Number = int | Fraction


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def estimate_M(G: WeightedGraph, k: int) -> int:
    """Value of the greedy 2-approximation, so that ``OPT <= M <= 2 OPT``."""
    if not 1 <= k <= G.n:
        raise KCutError(f"k={k} must lie in 1..n={G.n}")
    return sv_two_approx(G, k).value


@dataclass(frozen=True, eq=False)
class ContractedInstance:
    """Graph and tree after merging the endpoints of heavy tree edges."""

    graph: WeightedGraph
    tree: RootedSpanningTree
    mapping: tuple[int, ...]

    def lift(self, labels: Sequence[int]) -> tuple[int, ...]:
        return tuple(labels[self.mapping[x]] for x in range(len(self.mapping)))


def contract_heavy_edges(G: WeightedGraph, T: RootedSpanningTree, M: int, k: int | None = None) -> ContractedInstance:
    """Contract every tree edge ``e`` with ``w(Cut({e})) > M``.

    Such an edge is never cut by an optimal k-cut that crosses the tree
    exactly ``k - 1`` times, because cutting it alone already costs more than
    ``M``. Raises when fewer than ``k`` vertices remain.
    """
    if T.n != G.n:
        raise KCutError("tree and graph vertex counts differ")
    from .graph import build_cross_table

    cross = build_cross_table(G, T)
    dsu = _DSU(G.n)
    for c in T.tree_vertices():
        if cross.escape(c, c) > M:
            dsu.union(c, T.parent[c])
    reps: dict[int, int] = {}
    mapping = []
    for x in range(G.n):
        mapping.append(reps.setdefault(dsu.find(x), len(reps)))
    n2 = len(reps)
    if k is not None and n2 < k:
        raise KCutError(f"contraction leaves {n2} vertices, fewer than k={k}")
    weights: dict[tuple[int, int], int] = {}
    for u, v, w in G.edges:
        a, b = mapping[u], mapping[v]
        if a != b:
            key = (min(a, b), max(a, b))
            weights[key] = weights.get(key, 0) + w
    H = build_graph(n2, [(a, b, w) for (a, b), w in sorted(weights.items())])
    tree_edges = sorted({tuple(sorted((mapping[c], mapping[T.parent[c]]))) for c in T.tree_vertices()} - {(a, a) for a in range(n2)})
    T2 = RootedSpanningTree.from_edges(n2, tree_edges, mapping[T.root], H)
    return ContractedInstance(H, T2, tuple(mapping))


class ApproxContext:
    """Weights between vertex masks of one graph, with memoisation."""

    def __init__(self, G: WeightedGraph, T: RootedSpanningTree):
        if T.n != G.n:
            raise KCutError("tree and graph vertex counts differ")
        self.G = G
        self.T = T
        self.n = G.n
        self.all = (1 << G.n) - 1
        self.nbr = [0] * G.n
        self.A = G.matrix
        for u, v, _ in G.edges:
            self.nbr[u] |= 1 << v
            self.nbr[v] |= 1 << u
        self.sub = [_mask(T.subtree(v)) for v in range(G.n)]
        self._memo: dict[tuple[int, int], int] = {}

    def weight(self, X: int, Y: int) -> int:
        """``w(E(X, Y))`` for disjoint masks."""
        if X > Y:
            X, Y = Y, X
        key = (X, Y)
        got = self._memo.get(key)
        if got is None:
            got = 0
            row = self.A
            ys = [y for y in _bits(Y)]
            for x in _bits(X):
                if self.nbr[x] & Y:
                    got += int(row[x, ys].sum())
            self._memo[key] = got
        return got

    def outside(self, X: int, v: int) -> int:
        """``w(E(X, V - T_v))``."""
        return self.weight(X, self.all & ~self.sub[v])

    def boundary(self, v: int) -> int:
        return self.outside(self.sub[v], v)

    def canonical(self, nodes: Iterable[int]) -> int:
        """Union of the subtrees of ``nodes``."""
        m = 0
        for x in nodes:
            m |= self.sub[x]
        return m

    def cut_of(self, U: Iterable[int]) -> int:
        """``w(Cut(U))``: cut weight after deleting the parent edges of ``U``."""
        from .graph import components_after_cut

        labels = components_after_cut(self.T, set(U))
        return cut_weight(self.G, labels)


@dataclass(frozen=True, eq=False)
class ImportantNodeSets:
    """Important nodes ``I_v`` for every vertex ``v`` with threshold ``W``."""

    sets: tuple[frozenset[int], ...]
    W: Number
    context: ApproxContext = field(repr=False)

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.sets[v]

    def phi(self, v: int, u: int) -> int:
        return self.context.outside(1 << u, v)

    def sigma(self, v: int, S: Iterable[int]) -> "Representative":
        S = set(S)
        if not S <= set(self.context.T.subtree(v)):
            raise KCutError("S must lie inside T_v")
        return Representative(v, frozenset(S & self.sets[v]))

    def sigma_inverse(self, v: int, R: "Representative | Iterable[int]") -> frozenset[int]:
        nodes = set(R.nodes if isinstance(R, Representative) else R)
        if not nodes <= self.sets[v]:
            raise KCutError("representative must be a subset of I_v")
        return frozenset(_bits(self.context.canonical(nodes)))

    def round(self, v: int, S: Iterable[int]) -> frozenset[int]:
        return self.sigma_inverse(v, self.sigma(v, S))

    def representatives(self, v: int, cap: int = REPRESENTATIVE_CAP) -> list[frozenset[int]]:
        return downward_closed_subsets(self.context.T, self.sets[v], cap)


@dataclass(frozen=True)
class Representative:
    owner: int
    nodes: frozenset[int]


def downward_closed_subsets(T: RootedSpanningTree, I: Iterable[int], cap: int = REPRESENTATIVE_CAP) -> list[frozenset[int]]:
    """All ``R`` within ``I`` closed under taking descendants that lie in ``I``."""
    nodes = sorted(I, key=lambda x: T.tin[x])
    if len(nodes) > cap:
        raise KCutError(f"|I_v| = {len(nodes)} exceeds the cap {cap}; use a larger W")
    out: list[frozenset[int]] = []

    def rec(i: int, chosen: frozenset[int]) -> None:
        if i == len(nodes):
            out.append(chosen)
            return
        x = nodes[i]
        if x in chosen:
            rec(i + 1, chosen)
            return
        rec(i + 1, chosen)
        below = frozenset(y for y in nodes if T.is_ancestor(x, y))
        rec(i + 1, chosen | below)

    rec(0, frozenset())
    return sorted(set(out), key=lambda r: (len(r), sorted(r)))


def compute_important_nodes(G: WeightedGraph, T: RootedSpanningTree, W: Number) -> ImportantNodeSets:
    """Top-down construction of the important node sets.

    ``I_root = {root}``. For a child ``v`` of ``p`` start from ``I_p`` within
    ``T_v``; inside every component of ``T_v`` minus those nodes whose
    ``phi_v`` weight exceeds ``W``, repeatedly mark the deepest vertex whose
    residual subtree weight is at least ``W / 2``; finally add ``v``.
    """
    if W <= 0:
        raise KCutError("W must be positive")
    ctx = ApproxContext(G, T)
    sets: list[frozenset[int]] = [frozenset()] * T.n
    sets[T.root] = frozenset({T.root})
    for v in T.order:
        if v == T.root:
            continue
        inside = set(T.subtree(v))
        outside_mask = ctx.all & ~ctx.sub[v]
        phi = {u: ctx.weight(1 << u, outside_mask) for u in inside}
        base = set(sets[T.parent[v]]) & inside
        chosen = set(base)
        seen: set[int] = set()
        for top in sorted(inside - base, key=lambda x: T.tin[x]):
            if top in seen:
                continue
            comp = [top]
            for x in comp:
                comp.extend(c for c in T.children[x] if c not in base)
            seen.update(comp)
            if sum(phi[u] for u in comp) <= W:
                continue
            residual = {}
            for u in sorted(comp, key=lambda x: -T.depth[x]):
                acc = phi[u] + sum(residual.get(c, 0) for c in T.children[u] if c not in base)
                if 2 * acc >= W:
                    chosen.add(u)
                    acc = 0
                residual[u] = acc
        chosen.add(v)
        sets[v] = frozenset(chosen)
    return ImportantNodeSets(tuple(sets), W, ctx)


def important_node_violations(I: ImportantNodeSets, M: Number) -> list[str]:
    """Checks (P1) to (P4) and the size bound; returns a list of failures."""
    ctx = I.context
    T = ctx.T
    bad = []
    for v in range(T.n):
        Iv = I[v]
        inside = set(T.subtree(v))
        if v not in Iv:
            bad.append(f"P4 fails at {v}")
        if not Iv <= inside:
            bad.append(f"I_{v} leaves T_{v}")
        if len(Iv) > 4 * M / I.W + 1:
            bad.append(f"P2 fails at {v}: |I_v|={len(Iv)}")
        if v != T.root and not (I[T.parent[v]] & inside) <= Iv:
            bad.append(f"P3 fails at {v}")
        rest = inside - Iv
        outside_mask = ctx.all & ~ctx.sub[v]
        seen: set[int] = set()
        for x in sorted(rest):
            if x in seen:
                continue
            comp, stack = set(), [x]
            while stack:
                y = stack.pop()
                if y in comp:
                    continue
                comp.add(y)
                nbrs = list(T.children[y]) + ([T.parent[y]] if y != T.root else [])
                stack.extend(z for z in nbrs if z in rest and z not in comp)
            seen |= comp
            if ctx.weight(_mask(comp), outside_mask) > I.W:
                bad.append(f"P1 fails at {v}")
    return bad


def _incomparable_sets(T: RootedSpanningTree, pool: Sequence[int], max_size: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(1, max_size + 1):
        for U in combinations(pool, size):
            if T.incomparable(U):
                out.append(U)
    return out


def _compositions_at_least(total: int, lows: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not lows:
        if total == 0:
            yield ()
        return
    rest_low = sum(lows[1:])
    for first in range(lows[0], total - rest_low + 1):
        for tail in _compositions_at_least(total - first, lows[1:]):
            yield (first,) + tail


def exact_dp(G: WeightedGraph, T: RootedSpanningTree, k: int, cap: int = EXACT_DP_CAP) -> dict:
    """Reference table ``(v, s, U) -> min w(Cut(U'))`` over ``U'`` of size ``s`` with maximal set ``U``.

    Evaluated by the child-decomposition recursions (the ``v in U`` case
    subtracts edges leaving ``T_v`` that the parent term already counts).
    Absent keys are infinite.
    """
    if G.n > cap:
        raise KCutError(f"exact_dp is a reference routine limited to n <= {cap}")
    ctx = ApproxContext(G, T)
    top = k - 1
    table: dict[tuple[int, int, frozenset[int]], int] = {}
    order = sorted(range(T.n), key=lambda x: -T.depth[x])

    def groups(v: int, U: Iterable[int]) -> list[tuple[int, tuple[int, ...]]]:
        out = []
        for c in T.children[v]:
            part = tuple(u for u in U if T.is_ancestor(c, u))
            if part:
                out.append((c, part))
        return out

    def combine(v: int, grp, total: int, outside: bool) -> int | None:
        best = None
        masks = [ctx.canonical(part) for _, part in grp]
        pair = sum(ctx.weight(masks[i], masks[j]) for i in range(len(grp)) for j in range(i + 1, len(grp)))
        for sizes in _compositions_at_least(total, [len(part) for _, part in grp]):
            val = 0
            for (c, part), s_c, m in zip(grp, sizes, masks):
                got = table.get((c, s_c, frozenset(part)))
                if got is None:
                    break
                val += got - (ctx.outside(m, v) if outside else 0)
            else:
                val -= pair
                if best is None or val < best:
                    best = val
        return best

    for v in order:
        below = [u for u in T.subtree(v) if u != v]
        for U in _incomparable_sets(T, below, top):
            grp = groups(v, U)
            for s in range(len(U), top + 1):
                got = combine(v, grp, s, False)
                if got is not None:
                    table[(v, s, frozenset(U))] = got
        if v == T.root:
            continue
        cut_v = ctx.boundary(v)
        table[(v, 1, frozenset({v}))] = cut_v
        inner = _incomparable_sets(T, below, top - 1)
        for s in range(2, top + 1):
            best = None
            for U2 in inner:
                if len(U2) > s - 1:
                    continue
                got = combine(v, groups(v, U2), s - 1, True)
                if got is not None and (best is None or got < best):
                    best = got
            if best is not None:
                table[(v, s, frozenset({v}))] = cut_v + best
    return table


def exact_dp_oracle(G: WeightedGraph, T: RootedSpanningTree, v: int, s: int, U: Iterable[int]) -> int | None:
    """Exhaustive ``min w(Cut(U'))`` over ``U'`` inside ``T_v`` of size ``s`` whose maximal vertices are ``U``."""
    U = frozenset(U)
    ctx = ApproxContext(G, T)
    pool = [u for u in T.subtree(v) if u != T.root]
    best = None
    for Up in combinations(pool, s):
        maximal = frozenset(x for x in Up if not any(y != x and T.is_ancestor(y, x) for y in Up))
        if maximal != U:
            continue
        val = ctx.cut_of(Up)
        if best is None or val < best:
            best = val
    return best


@dataclass
class _Option:
    child: int
    s: int
    R: frozenset[int]
    value: int
    mask: int


class _Tower:
    """Shared state for the compressed tables on one (contracted) instance."""

    def __init__(self, I: ImportantNodeSets, k: int):
        self.I = I
        self.ctx = I.context
        self.T = self.ctx.T
        self.k = k
        self.reps = [I.representatives(v) for v in range(self.T.n)]

    def options(self, table: dict, v: int, s: int, R: frozenset[int]):
        """Per child: the finite ``(s_c, R_c)`` states compatible with ``(v, R)``, plus forced children."""
        T, Iv = self.T, self.I[v]
        v_in = v in R
        need = s - 1 if v_in else s
        opts: list[list[_Option]] = []
        forced: list[bool] = []
        for c in T.children[v]:
            target = frozenset(x for x in R if T.is_ancestor(c, x))
            row = []
            for Rc in self.reps[c]:
                if not v_in and (Rc & Iv) != target:
                    continue
                for s_c in range(1, need + 1):
                    val = table.get((c, s_c, Rc))
                    if val is not None:
                        row.append(_Option(c, s_c, Rc, val[0], self.ctx.canonical(Rc)))
            opts.append(row)
            forced.append(bool(target) and not v_in)
        return opts, forced, need, v_in

    def term(self, v: int, chosen: Sequence[_Option], v_in: bool) -> int:
        ctx = self.ctx
        val = sum(o.value for o in chosen)
        if v_in:
            val -= sum(ctx.outside(o.mask, v) for o in chosen)
        for i in range(len(chosen)):
            for j in range(i + 1, len(chosen)):
                val -= ctx.weight(chosen[i].mask, chosen[j].mask)
        return val

    def best_combination(self, v: int, opts, forced, need: int, v_in: bool):
        """Exhaustive minimum over selected children, their sizes and representatives."""
        best = None
        n_kids = len(opts)

        def rec(i: int, left: int, chosen: list[_Option]) -> None:
            nonlocal best
            if i == n_kids:
                if left == 0 and chosen:
                    val = self.term(v, chosen, v_in)
                    key = (val, [(o.child, o.s, sorted(o.R)) for o in chosen])
                    if best is None or key < best[0]:
                        best = (key, tuple(chosen))
                return
            if not forced[i]:
                rec(i + 1, left, chosen)
            for o in opts[i]:
                if o.s <= left:
                    chosen.append(o)
                    rec(i + 1, left - o.s, chosen)
                    chosen.pop()

        rec(0, need, [])
        if best is None:
            return None
        return best[0][0], best[1]

    def base(self, v: int, s: int, R: frozenset[int]):
        """Value of ``(v, s, R)`` when no children are involved, else ``NotImplemented``."""
        if v in R and v == self.T.root:
            return None
        if v in R and s == 1:
            return (self.ctx.boundary(v), ())
        return NotImplemented

    def states(self) -> Iterator[tuple[int, int, frozenset[int]]]:
        for v in sorted(range(self.T.n), key=lambda x: -self.T.depth[x]):
            for s in range(1, self.k):
                for R in self.reps[v]:
                    yield v, s, R

    def witness_cuts(self, table: dict, v: int, s: int, R: frozenset[int]) -> list[int]:
        """Cut vertices obtained by unfolding the stored argmin choices."""
        out = []
        stack = [(v, s, R)]
        while stack:
            x, sx, Rx = stack.pop()
            _, chosen = table[(x, sx, Rx)]
            if x in Rx:
                out.append(x)
            stack.extend((o.child, o.s, o.R) for o in chosen)
        return sorted(out)


def small_dp(G: WeightedGraph, T: RootedSpanningTree, k: int, W: Number | ImportantNodeSets) -> dict:
    """Compressed table ``(v, s, R) -> (value, choices)`` by exhaustive combination."""
    I = W if isinstance(W, ImportantNodeSets) else compute_important_nodes(G, T, W)
    tower = _Tower(I, k)
    table: dict = {}
    for v, s, R in tower.states():
        got = tower.base(v, s, R)
        if got is NotImplemented:
            opts, forced, need, v_in = tower.options(table, v, s, R)
            got = tower.best_combination(v, opts, forced, need, v_in)
            if got is not None and v_in:
                got = (got[0] + tower.ctx.boundary(v), got[1])
        if got is not None:
            table[(v, s, R)] = got
    return table


@dataclass(frozen=True, eq=False)
class PVCInstance:
    """Node-weighted partial vertex cover instance on a small dense graph."""

    node_weights: tuple[Number, ...]
    edge_weights: np.ndarray
    sizes: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.node_weights)

    def value(self, S: Iterable[int]) -> Number:
        """``phi(S)`` plus the weight of every edge with an endpoint in ``S``."""
        S = sorted(set(S))
        inside = np.zeros(self.n, dtype=bool)
        inside[S] = True
        E = self.edge_weights
        touched = inside[:, None] | inside[None, :]
        edge_part = E[np.triu(touched, 1)].sum()
        return sum(self.node_weights[i] for i in S) + edge_part.item()


def make_pvc(node_weights, edge_weights=None, sizes=None) -> PVCInstance:
    n = len(node_weights)
    if edge_weights is None:
        E = np.zeros((n, n), dtype=np.int64)
    else:
        E = np.array(edge_weights, dtype=np.int64)
        if E.shape != (n, n) or (E != E.T).any():
            raise KCutError("edge weights must be a symmetric n x n matrix")
        np.fill_diagonal(E, 0)
    if (E < 0).any() or any(x < 0 for x in node_weights):
        raise KCutError("partial vertex cover weights must be nonnegative")
    if sizes is not None and len(sizes) != n:
        raise KCutError("sizes must give one entry per node")
    return PVCInstance(tuple(node_weights), E, None if sizes is None else tuple(sizes))


def _pvc_feasible(H: PVCInstance, S: Sequence[int], size_target: int | None) -> bool:
    return size_target is None or sum(H.sizes[i] for i in S) == size_target  # type: ignore[index]


def _pvc_search(H: PVCInstance, pool: Sequence[int], ell: int, forced: Sequence[int], size_target):
    best = None
    need = ell - len(forced)
    if need < 0:
        return None
    for extra in combinations(pool, need):
        S = tuple(sorted(set(forced) | set(extra)))
        if not _pvc_feasible(H, S, size_target):
            continue
        val = H.value(S)
        if best is None or (val, S) < (best[1], best[0]):
            best = (S, val)
    return best


def pvc_exact(H: PVCInstance, ell: int, size_target: int | None = None, forced: Iterable[int] = (), cap: int = PVC_EXACT_CAP):
    """Exact minimiser over sets of exactly ``ell`` nodes, or ``None`` if infeasible.

    ``forced`` nodes must be chosen, and with ``size_target`` the chosen
    nodes' sizes must sum to it. Ties go to the lexicographically first set.
    """
    if H.n > cap:
        raise KCutError(f"pvc_exact enumerates at most {cap} nodes, got {H.n}")
    if ell < 0:
        raise KCutError("ell must be nonnegative")
    forced = tuple(sorted(set(forced)))
    pool = [i for i in range(H.n) if i not in forced]
    return _pvc_search(H, pool, ell, forced, size_target)


def default_tau(ell: int, delta: float) -> int:
    return max(2, math.ceil(ell / delta))


def default_pvc_rounds(n: int, ell: int, tau: int, cap: int = PVC_ROUND_CAP) -> int:
    return int(min(cap, math.ceil(2 * tau**ell * math.log(max(n, 2)))))


def pvc_approx(
    H: PVCInstance,
    ell: int,
    delta: float,
    seed: int = 0,
    rounds: int | None = None,
    tau: int | None = None,
    size_target: int | None = None,
    forced: Iterable[int] = (),
):
    """Colour-coding search for partial vertex cover.

    Each round colours every free node red with probability ``1 / tau`` and
    solves the problem exactly over red nodes; the best round wins. A round
    in which the optimum is all red recovers it, so ``rounds`` of order
    ``tau ** ell`` succeed with high probability. ``ell == 1`` is solved
    exactly by scanning nodes.
    """
    if delta <= 0:
        raise KCutError("delta must be positive")
    forced = tuple(sorted(set(forced)))
    pool = [i for i in range(H.n) if i not in forced]
    need = ell - len(forced)
    if need < 0:
        return None
    if need <= 1:
        return _pvc_search(H, pool, ell, forced, size_target)
    tau = tau or default_tau(ell, delta)
    rounds = rounds or default_pvc_rounds(H.n, need, tau)
    if rounds < 1:
        raise KCutError("rounds must be at least 1")
    rng = np.random.default_rng(derive_seed(seed, 0x9C))
    best = None
    seen: set[tuple[int, ...]] = set()
    chunk = 4096
    for start in range(0, rounds, chunk):
        size = min(chunk, rounds - start)
        red = rng.random((size, len(pool))) * tau < 1
        for row in red[red.sum(axis=1) >= need]:
            cand = tuple(p for p, r in zip(pool, row) if r)
            if cand in seen:
                continue
            seen.add(cand)
            got = _pvc_search(H, cand, ell, forced, size_target)
            if got is not None and (best is None or (got[1], got[0]) < (best[1], best[0])):
                best = got
    return best


@dataclass
class PolyDPResult:
    value: int
    cut_vertices: tuple[int, ...]
    table: dict
    guesses: int
    pvc_calls: int


def poly_dp(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    I: ImportantNodeSets,
    M: int,
    delta: float,
    seed: int = 0,
    guess_limit: int = GUESS_LIMIT,
    rounds: int | None = None,
    pvc: str = "exact",
    pvc_rounds: int | None = None,
) -> PolyDPResult | None:
    """Compressed DP whose combination step goes through partial vertex cover.

    Per state the children are guessed a size and representative. When the
    guess space has at most ``guess_limit`` elements it is enumerated; with
    exact PVC the minimum over guesses and PVC solutions is then taken per
    selected child set, which is the same minimum. Otherwise ``rounds``
    random guesses are drawn and each builds a PVC instance with node weights
    padded by ``M`` (``2M`` when ``v`` is cut) that ``pvc`` solves
    (``"exact"`` or ``"approx"``). Scores subtract the padding again.
    """
    if pvc not in ("exact", "approx"):
        raise KCutError(f"unknown pvc mode {pvc!r}")
    tower = _Tower(I, k)
    ctx = tower.ctx
    table: dict = {}
    guesses = 0
    pvc_calls = 0
    for v, s, R in tower.states():
        got = tower.base(v, s, R)
        if got is NotImplemented:
            opts, forced, need, v_in = tower.options(table, v, s, R)
            lo = max(1, sum(forced))
            space = (need - lo + 1) * math.prod(max(1, len(o)) for o in opts)
            if need < lo or any(f and not o for f, o in zip(forced, opts)):
                got = None
            elif space <= guess_limit and pvc == "exact":
                guesses += space
                got = tower.best_combination(v, opts, forced, need, v_in)
            else:
                got, calls = _sampled_state(
                    tower, v, s, R, opts, forced, need, v_in, lo, M, delta, seed, rounds, pvc, pvc_rounds,
                    enumerate_all=space <= guess_limit,
                )
                guesses += calls
                pvc_calls += calls
            if got is not None and v_in:
                got = (got[0] + ctx.boundary(v), got[1])
        if got is not None:
            table[(v, s, R)] = got
    key = (T.root, k - 1, frozenset())
    if key not in table:
        return None
    value = table[key][0]
    return PolyDPResult(value, tuple(tower.witness_cuts(table, *key)), table, guesses, pvc_calls)


def _guess_stream(opts, need: int, lo: int, rng: random.Random, rounds: int, enumerate_all: bool):
    if enumerate_all:
        from itertools import product

        rows = [list(range(len(o))) if o else [None] for o in opts]
        for ell in range(lo, need + 1):
            for pick in product(*rows):
                yield ell, pick
        return
    for _ in range(rounds):
        ell = rng.randint(lo, need)
        yield ell, tuple(rng.randrange(len(o)) if o else None for o in opts)


def _sampled_state(tower: _Tower, v, s, R, opts, forced, need, v_in, lo, M, delta, seed, rounds, pvc, pvc_rounds, enumerate_all):
    ctx = tower.ctx
    if rounds is None:
        width = max((len(o) for o in opts), default=1)
        rounds = default_guess_rounds((need - lo + 1) * width**need)
    rng = random.Random(derive_seed(seed, v, s, _mask(R)))
    pad = 2 * M if v_in else M
    best = None
    calls = 0
    for ell, pick in _guess_stream(opts, need, lo, rng, rounds, enumerate_all):
        nodes = [opts[i][p] for i, p in enumerate(pick) if p is not None]
        index = {o.child: j for j, o in enumerate(nodes)}
        t = len(nodes)
        psi = np.zeros((t, t), dtype=np.int64)
        for i in range(t):
            for j in range(i + 1, t):
                psi[i, j] = psi[j, i] = ctx.weight(nodes[i].mask, nodes[j].mask)
        phi = []
        for i, o in enumerate(nodes):
            w = o.value - int(psi[i].sum()) + pad
            if v_in:
                w -= ctx.outside(o.mask, v)
            phi.append(w)
        H = make_pvc(phi, psi, [o.s for o in nodes])
        must = [index[c] for c, f in zip(tower.T.children[v], forced) if f]
        calls += 1
        if pvc == "exact" or t <= 1:
            sol = pvc_exact(H, ell, size_target=need, forced=must)
        else:
            sol = pvc_approx(H, ell, delta, derive_seed(seed, v, s, calls), pvc_rounds, size_target=need, forced=must)
        if sol is None:
            continue
        S, val = sol
        score = int(val) - (2 * ell * M if v_in else ell * M)
        chosen = tuple(nodes[i] for i in S)
        key = (score, [(o.child, o.s, sorted(o.R)) for o in chosen])
        if best is None or key < best[0]:
            best = (key, chosen)
    if best is None:
        return None, calls
    return (best[0][0], best[1]), calls


def default_guess_rounds(choices: int, cap: int = 20_000) -> int:
    """Random guesses for a state whose guess space has ``choices`` elements.

    ``choices * (ln choices + 8)`` rounds miss any fixed guess with
    probability below ``e**-8 / choices``.
    """
    choices = max(1, choices)
    return int(min(cap, math.ceil(choices * (math.log(choices) + 8))))


def default_parameters(eps: float, k: int, M: int) -> tuple[Fraction, Fraction]:
    """``W = eps M / (32 k^3)`` and ``delta = eps / (32 k^2)`` as exact fractions."""
    e = Fraction(eps).limit_denominator(10**6)
    return e * M / (32 * k**3), e / (32 * k * k)


@dataclass
class DPTables:
    exact: dict | None
    small: dict | None
    poly: dict | None
    params: dict


def compute_dp_tables(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    W: Number,
    M: int | None = None,
    delta: float = 0.25,
    seed: int = 0,
    pvc: str = "exact",
    guess_limit: int = GUESS_LIMIT,
    exact: bool = True,
) -> DPTables:
    """ExactDP, SmallDP and PolyDP on one tree with shared important nodes.

    The exact table is skipped (``None``) when ``exact`` is false or ``n``
    exceeds its cap. ``params`` records the ``W``, ``delta`` and ``M`` used.
    """
    M = estimate_M(G, k) if M is None else M
    I = compute_important_nodes(G, T, W)
    ex = exact_dp(G, T, k) if exact and G.n <= EXACT_DP_CAP else None
    sm = small_dp(G, T, k, I)
    res = poly_dp(G, T, k, I, M, delta, seed, guess_limit, pvc=pvc)
    poly = res.table if res is not None else None
    return DPTables(ex, sm, poly, {"W": W, "delta": delta, "M": M, "important": I})


def approx_on_tree(
    G: WeightedGraph,
    T: RootedSpanningTree,
    k: int,
    eps: float,
    M: int | None = None,
    W: Number | None = None,
    delta: float | None = None,
    seed: int = 0,
    guess_limit: int = GUESS_LIMIT,
    rounds: int | None = None,
    pvc: str = "exact",
):
    """Contract, compute important nodes and run the PolyDP on one tree.

    Returns ``(labels, dp_value, params)`` for the original graph, or
    ``None`` when the tree admits no ``k - 1`` light cut edges.
    """
    M = estimate_M(G, k) if M is None else M
    W0, d0 = default_parameters(eps, k, M)
    W = W0 if W is None else W
    delta = d0 if delta is None else delta
    try:
        inst = contract_heavy_edges(G, T, M, k)
    except KCutError:
        return None
    I = compute_important_nodes(inst.graph, inst.tree, W)
    res = poly_dp(inst.graph, inst.tree, k, I, M, float(delta), seed, guess_limit, rounds, pvc)
    if res is None:
        return None
    from .graph import components_after_cut

    small = components_after_cut(inst.tree, res.cut_vertices)
    labels = inst.lift(small)
    return labels, res.value, {"M": M, "W": W, "delta": delta, "n_contracted": inst.graph.n}


def solve_ptas(
    G: WeightedGraph,
    k: int,
    eps: float,
    seed: int = 0,
    W: Number | None = None,
    delta: float | None = None,
    tree_count: int | None = None,
    sample_count: int | None = None,
    refine_budget: int | None = None,
    guess_limit: int = GUESS_LIMIT,
    pvc: str = "exact",
    cache: dict | None = None,
) -> KCutSolution:
    """Packing, sampling and refinement, then the PolyDP on every candidate tree.

    The returned solution's value is the true cut weight of the best
    reconstructed partition; ``info["bound"]`` is ``(1 + eps) M``.
    """
    if not eps > 0:
        raise KCutError("eps must be positive (W and delta would vanish)")
    if not 2 <= k <= G.n:
        raise KCutError(f"k={k} must lie in 2..n={G.n}")
    from .pipeline import candidate_tree_ids

    M = estimate_M(G, k)
    memo = cache if cache is not None else {}
    best = None
    cands = candidate_tree_ids(G, k, seed, tree_count, sample_count, refine_budget)
    for ids in cands:
        key = (ids, k, eps, W, delta, guess_limit, pvc)
        if key not in memo:
            T = RootedSpanningTree.from_edge_ids(G, ids)
            got = approx_on_tree(G, T, k, eps, M, W, delta, seed, guess_limit, pvc=pvc)
            memo[key] = None if got is None else (cut_weight(G, got[0]), got[0], got[1])
        got = memo[key]
        if got is not None and (best is None or got[0] < best[0]):
            best = got
    if best is None:
        labels = sv_two_approx(G, k).labels
        best = (cut_weight(G, labels), labels, None)
    W0, d0 = default_parameters(eps, k, M)
    return make_solution(
        G, best[1], "ptas", seed,
        bound=(1 + eps) * M, M=M, W=W if W is not None else W0, delta=delta if delta is not None else d0,
        dp_value=best[2], candidates=len(cands),
    )
