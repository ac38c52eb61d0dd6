# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the reference."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


cdef inline uint64_t _sm_next(uint64_t* state) noexcept nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _sm_below(uint64_t* state, uint64_t bound) noexcept nogil:
    cdef uint64_t rem = (<uint64_t>0 - bound) % bound
    cdef uint64_t x
    while True:
        x = _sm_next(state)
        if rem == 0 or x < (<uint64_t>0 - rem):
            return x % bound


def triangle_min(const int64_t[:, :] w12, const int64_t[:, :] w23, const int64_t[:, :] w31,
                 const unsigned char[:, :] m12, const unsigned char[:, :] m23,
                 const unsigned char[:, :] m31):
    cdef Py_ssize_t a = w12.shape[0], b = w12.shape[1], c = w23.shape[1]
    cdef Py_ssize_t i, j, l, bi = -1, bj = -1, bl = -1
    cdef int64_t base, total, best = 0
    cdef bint found = False
    if a == 0 or b == 0 or c == 0:
        return None
    with nogil:
        for i in range(a):
            for j in range(b):
                if not m12[i, j]:
                    continue
                base = w12[i, j]
                for l in range(c):
                    if not m23[j, l] or not m31[l, i]:
                        continue
                    total = base + w23[j, l] + w31[l, i]
                    if not found or total < best:
                        found = True
                        best = total
                        bi = i
                        bj = j
                        bl = l
    if not found:
        return None
    return (int(best), int(bi), int(bj), int(bl))


cdef void _rgs_rec(int i, int used, int64_t partial, int n, int k, const int64_t[:, :] A,
                   int* labels, int64_t* best_value, int* best_labels) noexcept nogil:
    cdef int c, j, top, new_used, remaining
    cdef int64_t add, total
    if i == n:
        if used == k and (best_value[0] < 0 or partial < best_value[0]):
            best_value[0] = partial
            for j in range(n):
                best_labels[j] = labels[j]
        return
    remaining = n - i
    top = used if used < k - 1 else k - 1
    for c in range(top + 1):
        new_used = used + 1 if c == used else used
        if k - new_used > remaining - 1:
            continue
        add = 0
        for j in range(i):
            if labels[j] != c:
                add += A[i, j]
        total = partial + add
        if best_value[0] >= 0 and total >= best_value[0]:
            continue
        labels[i] = c
        _rgs_rec(i + 1, new_used, total, n, k, A, labels, best_value, best_labels)


def rgs_min_kcut(const int64_t[:, :] adj, int k):
    cdef int n = adj.shape[0]
    cdef int64_t best_value = -1
    cdef int* labels
    cdef int* best_labels
    if n == 0 or k < 1 or k > n:
        return -1, []
    labels = <int*>malloc(n * sizeof(int))
    best_labels = <int*>malloc(n * sizeof(int))
    try:
        labels[0] = 0
        with nogil:
            _rgs_rec(1, 1, 0, n, k, adj, labels, &best_value, best_labels)
        return int(best_value), [best_labels[j] for j in range(n)]
    finally:
        free(labels)
        free(best_labels)


cdef inline int _find(int* parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def karger_batch(int n, const int64_t[:] eu, const int64_t[:] ev, const int64_t[:] ew, int k,
                 const uint64_t[:] seeds):
    cdef Py_ssize_t m = eu.shape[0], reps = seeds.shape[0], rep, e
    cdef int comps, a, b, x
    cdef uint64_t state, r
    cdef int64_t total, value, best_value = -1
    cdef Py_ssize_t best_rep = -1
    cdef int* parent = <int*>malloc(n * sizeof(int))
    cdef int* best_roots = <int*>malloc(n * sizeof(int))
    try:
        with nogil:
            for rep in range(reps):
                state = seeds[rep]
                for x in range(n):
                    parent[x] = x
                comps = n
                while comps > k:
                    total = 0
                    for e in range(m):
                        if _find(parent, <int>eu[e]) != _find(parent, <int>ev[e]):
                            total += ew[e]
                    r = _sm_below(&state, <uint64_t>total)
                    for e in range(m):
                        a = _find(parent, <int>eu[e])
                        b = _find(parent, <int>ev[e])
                        if a == b:
                            continue
                        if r < <uint64_t>ew[e]:
                            if a < b:
                                parent[b] = a
                            else:
                                parent[a] = b
                            comps -= 1
                            break
                        r -= <uint64_t>ew[e]
                value = 0
                for e in range(m):
                    if _find(parent, <int>eu[e]) != _find(parent, <int>ev[e]):
                        value += ew[e]
                if best_value < 0 or value < best_value:
                    best_value = value
                    best_rep = rep
                    for x in range(n):
                        best_roots[x] = _find(parent, x)
        if best_rep < 0:
            return (-1, [], -1)
        return (int(best_value), [best_roots[x] for x in range(n)], int(best_rep))
    finally:
        free(parent)
        free(best_roots)


def refine_walks(int n, const int64_t[:] eu, const int64_t[:] ev, const int64_t[:] ew,
                 tree_edges, int length, const uint64_t[:] seeds):
    cdef Py_ssize_t m = eu.shape[0], walks = seeds.shape[0], row, e, t, q
    cdef int tcount = n - 1, step, idx, x, y, top
    cdef int64_t drop, chosen, total, tmp
    cdef uint64_t state, r
    start = np.sort(np.asarray(tree_edges, dtype=np.int64))
    cdef int64_t[:] start_v = start
    out = np.empty((walks, tcount), dtype=np.int64)
    cdef int64_t[:, :] out_v = out
    cdef int64_t* tre = <int64_t*>malloc(max(tcount, 1) * sizeof(int64_t))
    cdef char* side = <char*>malloc(max(n, 1) * sizeof(char))
    cdef int* stack = <int*>malloc(max(n, 1) * sizeof(int))
    # adjacency as CSR rebuilt per step
    cdef int* deg = <int*>malloc((n + 1) * sizeof(int))
    cdef int* nbr = <int*>malloc(max(2 * tcount, 1) * sizeof(int))
    cdef int* fill = <int*>malloc((n + 1) * sizeof(int))
    try:
        with nogil:
            for row in range(walks):
                state = seeds[row]
                for t in range(tcount):
                    tre[t] = start_v[t]
                for step in range(length):
                    idx = <int>_sm_below(&state, <uint64_t>tcount)
                    drop = tre[idx]
                    for x in range(n + 1):
                        deg[x] = 0
                    for t in range(tcount):
                        if tre[t] != drop:
                            deg[eu[tre[t]] + 1] += 1
                            deg[ev[tre[t]] + 1] += 1
                    for x in range(n):
                        deg[x + 1] += deg[x]
                    for x in range(n + 1):
                        fill[x] = deg[x]
                    for t in range(tcount):
                        if tre[t] != drop:
                            nbr[fill[eu[tre[t]]]] = <int>ev[tre[t]]
                            fill[eu[tre[t]]] += 1
                            nbr[fill[ev[tre[t]]]] = <int>eu[tre[t]]
                            fill[ev[tre[t]]] += 1
                    for x in range(n):
                        side[x] = 0
                    side[eu[drop]] = 1
                    stack[0] = <int>eu[drop]
                    top = 1
                    while top > 0:
                        top -= 1
                        x = stack[top]
                        for q in range(deg[x], deg[x + 1]):
                            y = nbr[q]
                            if not side[y]:
                                side[y] = 1
                                stack[top] = y
                                top += 1
                    total = 0
                    for e in range(m):
                        if side[eu[e]] != side[ev[e]]:
                            total += ew[e]
                    r = _sm_below(&state, <uint64_t>total)
                    chosen = -1
                    for e in range(m):
                        if side[eu[e]] != side[ev[e]]:
                            if r < <uint64_t>ew[e]:
                                chosen = e
                                break
                            r -= <uint64_t>ew[e]
                    tre[idx] = chosen
                    # insertion sort keeps the row ordered
                    for t in range(1, tcount):
                        tmp = tre[t]
                        q = t - 1
                        while q >= 0 and tre[q] > tmp:
                            tre[q + 1] = tre[q]
                            q -= 1
                        tre[q + 1] = tmp
                for t in range(tcount):
                    out_v[row, t] = tre[t]
        return out
    finally:
        free(tre)
        free(side)
        free(stack)
        free(deg)
        free(nbr)
        free(fill)


def stoer_wagner(const int64_t[:, :] adj):
    cdef int n = adj.shape[0]
    A_np = np.array(adj, dtype=np.int64, copy=True)
    cdef int64_t[:, :] A = A_np
    members = [[v] for v in range(n)]
    alive_np = np.ones(n, dtype=np.int8)
    cdef signed char[:] alive = alive_np
    w_np = np.zeros(n, dtype=np.int64)
    cdef int64_t[:] weights = w_np
    inset_np = np.zeros(n, dtype=np.int8)
    cdef signed char[:] inset = inset_np
    cdef int count = n, phase_size, step, v, pick, prev, last
    cdef int64_t best_value = -1, cut
    best_side = []
    while count > 1:
        for v in range(n):
            weights[v] = 0
            inset[v] = 0
        prev = -1
        last = -1
        phase_size = count
        for step in range(phase_size):
            pick = -1
            for v in range(n):
                if alive[v] and not inset[v] and (pick < 0 or weights[v] > weights[pick]):
                    pick = v
            inset[pick] = 1
            prev = last
            last = pick
            for v in range(n):
                if alive[v] and not inset[v]:
                    weights[v] += A[pick, v]
        cut = weights[last]
        if best_value < 0 or cut < best_value:
            best_value = cut
            best_side = sorted(members[last])
        for v in range(n):
            if alive[v] and v != prev and v != last:
                A[prev, v] += A[last, v]
                A[v, prev] = A[prev, v]
        members[prev].extend(members[last])
        alive[last] = 0
        count -= 1
    return int(best_value), best_side
