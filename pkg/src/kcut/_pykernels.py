"""Pure-Python implementations of the hot kernels.

These mirror ``_ckernels.pyx`` line for line (same loop orders, same random
stream) so that both backends return identical results. The compiled module
is preferred at import time; see ``_backend``.
"""

from __future__ import annotations

import numpy as np

from ._rng import SplitMix

BACKEND = "python"


def triangle_min(w12, w23, w31, m12, m23, m31):
    """Naive minimum-weight triangle scan over dense tripartite matrices.

    ``w12[i, j]``, ``w23[j, l]`` and ``w31[l, i]`` hold edge weights and the
    ``m**`` arrays flag which edges exist. Triangles are visited in
    lexicographic ``(i, j, l)`` order and only a strictly smaller total
    replaces the incumbent, so the first minimum wins ties.
    Returns ``None`` or ``(value, i, j, l)``.
    """
    a, b = w12.shape
    c = w23.shape[1]
    if a == 0 or b == 0 or c == 0:
        return None
    W12, W23, W31 = w12.tolist(), w23.tolist(), w31.tolist()
    M12, M23, M31 = m12.tolist(), m23.tolist(), m31.tolist()
    best = None
    for i in range(a):
        row12, mrow12 = W12[i], M12[i]
        for j in range(b):
            if not mrow12[j]:
                continue
            base = row12[j]
            row23, mrow23 = W23[j], M23[j]
            for l in range(c):
                if not mrow23[l] or not M31[l][i]:
                    continue
                total = base + row23[l] + W31[l][i]
                if best is None or total < best[0]:
                    best = (total, i, j, l)
    return best


def rgs_min_kcut(adj, k: int):
    """Exact minimum k-cut by restricted-growth-string branch and bound.

    Vertex ``i`` receives a label in ``0..max_used+1``; the partial crossing
    weight to earlier vertices is a lower bound (weights are nonnegative), so
    branches whose partial weight reaches the incumbent are pruned. The search
    order is lexicographic in the label string and only strict improvements
    are kept, hence the lexicographically first optimum is returned.
    """
    n = adj.shape[0]
    A = adj.tolist()
    labels = [0] * n
    best_value = -1
    best_labels: list[int] = []

    def rec(i: int, used: int, partial: int) -> None:
        nonlocal best_value, best_labels
        if i == n:
            if used == k and (best_value < 0 or partial < best_value):
                best_value = partial
                best_labels = labels[:]
            return
        remaining = n - i
        row = A[i]
        top = min(used, k - 1)
        for c in range(top + 1):
            new_used = used + 1 if c == used else used
            if k - new_used > remaining - 1:
                continue
            add = 0
            for j in range(i):
                if labels[j] != c:
                    add += row[j]
            total = partial + add
            if best_value >= 0 and total >= best_value:
                continue
            labels[i] = c
            rec(i + 1, new_used, total)

    if n == 0 or k < 1 or k > n:
        return -1, []
    labels[0] = 0
    rec(1, 1, 0)
    return best_value, best_labels


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def karger_batch(n: int, eu, ev, ew, k: int, seeds):
    """Flat random contraction repeated once per seed.

    Each repetition contracts a uniformly weighted random non-loop edge until
    ``k`` super-vertices remain. Returns ``(best_value, labels, index)`` for
    the first repetition achieving the minimum.
    """
    U, V, Wt = eu.tolist(), ev.tolist(), ew.tolist()
    m = len(U)
    best = (-1, [], -1)
    for rep, seed in enumerate(seeds.tolist()):
        rng = SplitMix(int(seed))
        parent = list(range(n))
        comps = n
        while comps > k:
            total = 0
            for e in range(m):
                if _find(parent, U[e]) != _find(parent, V[e]):
                    total += Wt[e]
            r = rng.below(total)
            for e in range(m):
                a, b = _find(parent, U[e]), _find(parent, V[e])
                if a == b:
                    continue
                if r < Wt[e]:
                    parent[max(a, b)] = min(a, b)
                    comps -= 1
                    break
                r -= Wt[e]
        value = 0
        for e in range(m):
            if _find(parent, U[e]) != _find(parent, V[e]):
                value += Wt[e]
        if best[0] < 0 or value < best[0]:
            roots = [_find(parent, x) for x in range(n)]
            best = (value, roots, rep)
    return best


def refine_walks(n: int, eu, ev, ew, tree_edges, length: int, seeds):
    """Run one random edge-swap walk of ``length`` steps per seed.

    A step deletes a uniformly random tree edge and inserts an edge of the
    resulting cut sampled proportionally to weight. Returns an int64 array
    with one sorted tree edge-id row per walk.
    """
    U, V, Wt = eu.tolist(), ev.tolist(), ew.tolist()
    m = len(U)
    start = sorted(int(x) for x in tree_edges)
    seeds = seeds.tolist()
    out = np.empty((len(seeds), len(start)), dtype=np.int64)
    for row, seed in enumerate(seeds):
        rng = SplitMix(int(seed))
        tre = list(start)
        for _ in range(length):
            idx = rng.below(n - 1)
            drop = tre[idx]
            adj = [[] for _ in range(n)]
            for e in tre:
                if e != drop:
                    adj[U[e]].append(V[e])
                    adj[V[e]].append(U[e])
            side = [0] * n
            side[U[drop]] = 1
            stack = [U[drop]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if not side[y]:
                        side[y] = 1
                        stack.append(y)
            total = 0
            for e in range(m):
                if side[U[e]] != side[V[e]]:
                    total += Wt[e]
            r = rng.below(total)
            chosen = -1
            for e in range(m):
                if side[U[e]] != side[V[e]]:
                    if r < Wt[e]:
                        chosen = e
                        break
                    r -= Wt[e]
            tre[idx] = chosen
            tre.sort()
        out[row, :] = tre
    return out


def stoer_wagner(adj):
    """Deterministic global minimum cut by maximum-adjacency orderings.

    Ties in the ordering go to the smallest super-vertex id and the first
    phase reaching the minimum wins. Returns ``(value, side)`` where ``side``
    lists the original vertices on one side of the cut.
    """
    n = adj.shape[0]
    A = [list(map(int, row)) for row in adj.tolist()]
    members = [[v] for v in range(n)]
    alive = list(range(n))
    best_value = -1
    best_side: list[int] = []
    while len(alive) > 1:
        weights = {v: 0 for v in alive}
        added = []
        remaining = set(alive)
        prev = last = -1
        while remaining:
            pick = -1
            for v in alive:
                if v in remaining and (pick < 0 or weights[v] > weights[pick]):
                    pick = v
            remaining.discard(pick)
            added.append(pick)
            prev, last = last, pick
            for v in remaining:
                weights[v] += A[pick][v]
        cut = weights[last]
        if best_value < 0 or cut < best_value:
            best_value = cut
            best_side = sorted(members[last])
        for v in alive:
            if v != prev and v != last:
                A[prev][v] += A[last][v]
                A[v][prev] = A[prev][v]
        members[prev].extend(members[last])
        alive.remove(last)
    return best_value, best_side
