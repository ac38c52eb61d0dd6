import math
import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcut.baselines import brute_force_kcut, extract_clique, reduce_clique_to_kcut
from kcut.corpus import random_tree_graph, random_weighted_graph
from kcut.deterministic import (
    Forest,
    balanced_separator,
    balanced_tripartition,
    default_separator_budget,
    degree_reduce,
    enumerate_forest_choices,
    first_t_tree,
    separator_crossing_bound,
    solve_deterministic,
    solve_deterministic_full,
)
from kcut.graph import KCutError, RootedSpanningTree, build_graph, components_after_cut

from oracles import random_spanning_tree


def _random_tree(n, rng):
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return RootedSpanningTree.from_edges(n, edges, 0)


def _random_degree3_tree(n, rng):
    edges, deg = [], [0] * n
    for v in range(1, n):
        u = rng.choice([x for x in range(v) if deg[x] < 3])
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    return list(range(n)), edges


def test_path_unchanged():
    T = RootedSpanningTree.from_edges(5, [(i, i + 1) for i in range(4)])
    ST = degree_reduce(T)
    assert ST.steiner == frozenset() and ST.tree.key() == T.key()


def test_star_reduction():
    T = RootedSpanningTree.from_edges(6, [(0, i) for i in range(1, 6)])
    ST = degree_reduce(T)
    assert len(ST.steiner) == 4
    assert ST.max_degree() == 3
    # z - 1 = 4 Steiner vertices on top of the 6 originals
    assert ST.tree.n == 10 <= 2 * 6


@given(st.integers(0, 10**6))
def test_reduction_invariants(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    T = _random_tree(n, rng)
    ST = degree_reduce(T)
    assert ST.max_degree() <= 3
    assert ST.tree.n <= 2 * n
    extra = sum(len(T.children[v]) - 1 for v in range(n) if len(T.children[v]) > 2)
    assert len(ST.steiner) == extra


@given(st.integers(0, 10**6))
def test_reduction_preserves_cuts(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 10)
    T = _random_tree(n, rng)
    ST = degree_reduce(T)
    R = ST.tree
    for r in range(1, 4):
        for cut in combinations(T.tree_vertices(), r):
            before = components_after_cut(T, cut)
            mapped = [R.child_of_edge(ST.original_edge(c)) for c in cut]
            after = components_after_cut(R, mapped)[:n]
            # same partition of the original vertices up to renaming
            pairs = {(a, b) for a, b in zip(before, after)}
            assert len(pairs) == len({a for a, _ in pairs}) == len({b for _, b in pairs})


def test_separator_two_edge_path():
    A, B, crossing = balanced_separator(([0, 1, 2], [(0, 1), (1, 2)]), [(0, 1), (1, 2)], 1)
    assert len(crossing) == 1
    assert sorted(A) in ([0], [2], [0, 1], [1, 2])
    assert A | B == {0, 1, 2} and not A & B


def _check_separator(vertices, edges, F, r):
    A, B, crossing, steps = balanced_separator((vertices, edges), F, r, return_steps=True)
    Fs = {tuple(sorted(e)) for e in F}
    inA = sum(1 for u, v in Fs if u in A and v in A)
    inB = sum(1 for u, v in Fs if u in B and v in B)
    assert A | B == set(vertices) and not A & B
    assert inA <= r and inB <= len(Fs) - r
    assert crossing == {e for e in edges if (e[0] in A) != (e[1] in A)}
    assert len(crossing) <= separator_crossing_bound(r)
    assert steps <= math.floor(math.log2(r + 1)) + 1


def test_separator_caterpillar():
    spine = [(i, i + 1) for i in range(9)]
    legs = [(i, 9 + i) for i in range(1, 9)]
    edges = spine + legs
    F = spine[:5] + legs[:4]
    _check_separator(list(range(18)), edges, F, 4)


@given(st.integers(0, 10**6))
def test_separator_random(seed):
    rng = random.Random(seed)
    vertices, edges = _random_degree3_tree(rng.randint(3, 30), rng)
    F = rng.sample(edges, rng.randint(2, len(edges)))
    _check_separator(vertices, edges, F, rng.randint(1, len(F) - 1))


def test_separator_rejections():
    path = ([0, 1, 2], [(0, 1), (1, 2)])
    with pytest.raises(KCutError):
        balanced_separator(path, [], 1)
    with pytest.raises(KCutError):
        balanced_separator(path, [(0, 1), (1, 2)], 2)
    with pytest.raises(KCutError):
        balanced_separator(([0, 1], [(0, 1), (1, 2)]), [(0, 1), (1, 2)], 1)
    star = ([0, 1, 2, 3, 4], [(0, i) for i in range(1, 5)])
    with pytest.raises(KCutError):
        balanced_separator(star, [(0, 1), (0, 2)], 1)


def _check_tripartition(vertices, edges, F):
    F1, F2, F3, crossing = balanced_tripartition((vertices, edges), F)
    Fs = {tuple(sorted(e)) for e in F}
    bound = math.ceil(len(Fs) / 3)
    cover = F1.vertices | F2.vertices | F3.vertices
    assert cover == set(vertices)
    assert not (F1.vertices & F2.vertices or F2.vertices & F3.vertices or F1.vertices & F3.vertices)
    for f in (F1, F2, F3):
        assert len(f.edges & Fs) <= max(bound, 1 if len(Fs) <= 1 else bound)
    assert set(edges) == F1.edges | F2.edges | F3.edges | crossing
    r = max(bound, 1)
    assert len(crossing) <= 2 * separator_crossing_bound(r)


def test_tripartition_binary_tree():
    edges = [((v - 1) // 2, v) for v in range(1, 15)]
    F = [(3, 7), (4, 9), (6, 13)]
    F1, F2, F3, _ = balanced_tripartition((list(range(15)), edges), F)
    assert all(len(f.edges & set(F)) <= 1 for f in (F1, F2, F3))


def test_tripartition_degenerate():
    vertices, edges = list(range(5)), [(i, i + 1) for i in range(4)]
    F1, F2, F3, crossing = balanced_tripartition((vertices, edges), [(0, 1), (3, 4)])
    assert F3.vertices == frozenset()
    _check_tripartition(vertices, edges, [(0, 1), (3, 4)])
    F1, F2, F3, crossing = balanced_tripartition((vertices, edges), [(1, 2)])
    assert F1.vertices == set(vertices) and not crossing


@given(st.integers(0, 10**6))
def test_tripartition_random(seed):
    rng = random.Random(seed)
    vertices, edges = _random_degree3_tree(rng.randint(3, 30), rng)
    F = rng.sample(edges, rng.randint(0, len(edges)))
    _check_tripartition(vertices, edges, F)


def test_forest_choices_edgeless():
    forest = Forest(frozenset({0, 1}), frozenset())
    choices = enumerate_forest_choices(2, forest, 2)
    assert all(c.cut_edges == () for c in choices)
    assert len(choices) == 4


def test_forest_choices_path_count():
    forest = Forest(frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)}))
    choices = enumerate_forest_choices(3, forest, 2, budget=1)
    assert {c.cut_edges for c in choices} == {(), ((0, 1),), ((1, 2),)}
    assert len(choices) == 2 + 4 + 4


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_forest_choices_count_and_groups(seed, k):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    vertices, edges = _random_degree3_tree(n, rng)
    keep = set(rng.sample(edges, rng.randint(0, len(edges))))
    forest = Forest(frozenset(vertices), frozenset(keep))
    original_n = rng.randint(1, n)
    budget = math.ceil(2 * k / 3)
    choices = enumerate_forest_choices(original_n, forest, k, budget)
    expected = 0
    for size in range(min(budget, len(keep)) + 1):
        for cut in combinations(sorted(keep), size):
            g = nx.Graph()
            g.add_nodes_from(vertices)
            g.add_edges_from(keep - set(cut))
            normal = sum(1 for c in nx.connected_components(g) if min(c) < original_n)
            expected += k ** normal
    assert len(choices) == expected
    assert len({(c.cut_edges, c.labels) for c in choices}) == expected
    groups = {}
    for c in choices:
        groups.setdefault(c.normal_label_set, []).append(c)
        used = {lab for lab, comp in zip(c.labels, c.components) if lab is not None}
        assert used == c.normal_label_set
        assert all((lab is None) == (comp[0] >= original_n) for lab, comp in zip(c.labels, c.components))
    assert sum(len(g) for g in groups.values()) == expected


def test_default_separator_budget():
    assert default_separator_budget(2) == 6
    assert default_separator_budget(4) == 8
    assert default_separator_budget(5) == 10


def test_tree_graph_k3():
    G = build_graph(5, [(i, i + 1, 1) for i in range(4)])
    T = RootedSpanningTree.from_edges(5, [(i, i + 1) for i in range(4)], 0, G)
    assert solve_deterministic(G, T, 3).value == 2
    G = random_tree_graph(8, random.Random(1), w_max=9)
    T = RootedSpanningTree.from_edges(8, [(u, v) for u, v, _ in G.edges], 0, G)
    lightest = sum(sorted(w for _, _, w in G.edges)[:3])
    assert solve_deterministic(G, T, 4).value == lightest


def test_matches_oracle_with_t_tree(small_random):
    for inst in small_random:
        G = inst.graph
        for k in (2, 3, 4):
            if k > G.n:
                continue
            opt = brute_force_kcut(G, k)
            T = first_t_tree(G, opt.partition, k)
            assert T is not None
            sol = solve_deterministic(G, T, k)
            assert sol.value == opt.value and sol.verify(G)


def test_exhaustive_mode_matches(small_random):
    for inst in small_random[:8]:
        G = inst.graph
        for k in (2, 3):
            opt = brute_force_kcut(G, k)
            T = first_t_tree(G, opt.partition, k)
            assert solve_deterministic(G, T, k, exhaustive=True).value == opt.value


def test_full_variant_on_random_graphs():
    rng = random.Random(21)
    for _ in range(4):
        G = random_weighted_graph(rng.randint(4, 6), rng)
        for k in (2, 3):
            assert solve_deterministic_full(G, k).value == brute_force_kcut(G, k).value


def test_recovers_cliques():
    cases = [
        (4, [(0, 1), (1, 2), (0, 2), (2, 3)], 3, True),
        (5, [(0, i) for i in range(1, 5)], 3, False),
        (4, [(0, 1), (2, 3)], 2, True),
    ]
    for n, h, k, present in cases:
        G, target = reduce_clique_to_kcut(n, h, k)
        sol = solve_deterministic_full(G, target)
        assert sol.value == brute_force_kcut(G, target).value
        assert (extract_clique(G, sol, k) is not None) == present
