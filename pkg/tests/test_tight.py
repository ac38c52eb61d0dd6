import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcut.baselines import brute_force_kcut, reduce_clique_to_kcut
from kcut.corpus import random_tree_graph, random_weighted_graph
from kcut.graph import KCutError, RootedSpanningTree, build_graph, tree_cut_children
from kcut.tight import (
    build_incomparable_aux,
    compositions,
    compute_states,
    default_guess_rounds,
    guess_peripheral,
    part_sizes,
    solve_incomparable,
    solve_tight_tree,
    solve_with_peripheral_guess,
)
from kcut.triangle import cap_aux_weights, min_weight_triangle

from oracles import random_incomparable_set, random_spanning_tree, state_oracle, tight_oracle, triangle_weights_for_set


def test_part_sizes():
    assert part_sizes(1) == (0, 0, 1)
    assert part_sizes(3) == (1, 1, 1)
    assert part_sizes(5) == (1, 2, 2)
    for c in range(12):
        r = part_sizes(c)
        assert sum(r) == c and max(r) - min(r) <= 1


def test_compositions():
    assert list(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(2, 3)) == []


def test_default_guess_rounds():
    assert default_guess_rounds(8, 3) == 27 * 3
    assert default_guess_rounds(100, 6) == 2000


def test_k2_aux_is_boundary():
    rng = random.Random(1)
    G = random_weighted_graph(7, rng)
    T = random_spanning_tree(G, rng)
    H = build_incomparable_aux(G, T, 2)
    assert H.sizes[:2] == (1, 1)
    for l, payload in enumerate(H.parts[2]):
        (c,) = payload
        assert H.weight(0, 0, l) == tree_cut_children(G, T, [c])[1]


def test_star_aux_k4():
    G = build_graph(5, [(0, i, 1) for i in range(1, 5)] + [(1, 2, 1), (3, 4, 1)])
    T = RootedSpanningTree.from_edges(5, [(0, i) for i in range(1, 5)])
    H = build_incomparable_aux(G, T, 4)
    for S in ([1, 2, 3], [1, 3, 4], [2, 3, 4]):
        weights = triangle_weights_for_set(H, S)
        assert weights and set(weights) == {tree_cut_children(G, T, S)[1]}


def test_path_aux_has_no_triangle():
    G = build_graph(5, [(i, i + 1, 1) for i in range(4)])
    T = RootedSpanningTree.from_edges(5, [(i, i + 1) for i in range(4)])
    assert min_weight_triangle(build_incomparable_aux(G, T, 3)) is None
    assert solve_incomparable(G, T, k=3) is None


@given(st.integers(0, 10**6), st.integers(2, 5))
def test_triangle_weight_identity(seed, k):
    rng = random.Random(seed)
    G = random_weighted_graph(rng.randint(k, 9), rng)
    T = random_spanning_tree(G, rng, root=rng.randrange(G.n))
    S = random_incomparable_set(T, k - 1, rng)
    if S is None:
        return
    H = build_incomparable_aux(G, T, k)
    weights = triangle_weights_for_set(H, S)
    assert weights
    assert set(weights) == {tree_cut_children(G, T, S)[1]}


def test_incomparable_on_clique_star():
    G, target = reduce_clique_to_kcut(4, [(0, 1), (1, 2), (0, 2), (2, 3)], 3)
    apex = G.n - 1
    T = RootedSpanningTree.from_edges(G.n, [(v, apex) for v in range(apex)], apex, G)
    sol = solve_incomparable(G, T, apex, target)
    assert sol.value == brute_force_kcut(G, target).value


@given(st.integers(0, 10**6))
def test_incomparable_star_tree_vs_restricted_brute(seed):
    from itertools import combinations

    rng = random.Random(seed)
    n = rng.randint(4, 8)
    G = random_weighted_graph(n, rng, p=1.0)
    T = RootedSpanningTree.from_edges(n, [(0, v) for v in range(1, n)], 0, G)
    best = min(tree_cut_children(G, T, F)[1] for F in combinations(range(1, n), 2))
    assert solve_incomparable(G, T, k=3).value == best


def test_incomparable_unit_star():
    G = build_graph(5, [(0, i, 1) for i in range(1, 5)])
    T = RootedSpanningTree.from_edges(5, [(0, i) for i in range(1, 5)])
    assert solve_incomparable(G, T, k=3).value == 2


def test_leaf_states():
    rng = random.Random(4)
    G = random_weighted_graph(8, rng)
    T = random_spanning_tree(G, rng)
    table = compute_states(G, T, 4)
    for leaf in T.tree_vertices():
        if T.subtree_size(leaf) == 1:
            assert table.get(leaf, 1) == tree_cut_children(G, T, [leaf])[1]
            assert table.get(leaf, 2) is None
    for e in T.tree_vertices():
        for s in range(1, 4):
            if s - 1 > T.subtree_size(e) - 1:
                assert table.get(e, s) is None


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_states_match_subset_oracle(seed, k):
    rng = random.Random(seed)
    G = random_weighted_graph(rng.randint(k, 9), rng)
    T = random_spanning_tree(G, rng, root=rng.randrange(G.n))
    table = compute_states(G, T, k, seed=seed)
    for e in T.tree_vertices():
        for s in range(1, k):
            expected = state_oracle(G, T, e, s)
            assert table.get(e, s) == expected
            if expected is not None:
                W = table.witness(e, s)
                assert len(W) == s - 1 and tree_cut_children(G, T, {e} | W)[1] == expected


def test_states_with_sampled_guesses():
    rng = random.Random(12)
    for _ in range(5):
        G = random_weighted_graph(9, rng)
        T = random_spanning_tree(G, rng)
        table = compute_states(G, T, 4, seed=3, guess_rounds=default_guess_rounds(9, 4))
        for e in T.tree_vertices():
            for s in range(1, 4):
                assert table.get(e, s) == state_oracle(G, T, e, s)


def test_tree_graph_takes_lightest_edges():
    rng = random.Random(6)
    for k in (2, 3, 4):
        G = random_tree_graph(8, rng, w_max=9)
        T = RootedSpanningTree.from_edges(8, [(u, v) for u, v, _ in G.edges], 0, G)
        lightest = sum(sorted(w for _, _, w in G.edges)[: k - 1])
        assert solve_tight_tree(G, T, k).value == lightest


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_tight_tree_matches_subset_oracle(seed, k):
    rng = random.Random(seed)
    G = random_weighted_graph(rng.randint(k, 9), rng)
    T = random_spanning_tree(G, rng, root=rng.randrange(G.n))
    sol = solve_tight_tree(G, T, k, seed=seed)
    assert sol.value == tight_oracle(G, T, k)
    assert sol.verify(G) and sol.k == k


def test_tight_tree_rejects_bad_k():
    G = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    T = RootedSpanningTree.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(KCutError):
        solve_tight_tree(G, T, 4)


def test_cap_leaves_triangle_unchanged(small_random):
    rng = random.Random(0)
    for inst in small_random:
        G = inst.graph
        for k in (2, 3, 4):
            if k > G.n:
                continue
            T = random_spanning_tree(G, rng)
            H = build_incomparable_aux(G, T, k)
            wmax = max(w for _, _, w in G.edges)
            assert min_weight_triangle(cap_aux_weights(H, k * G.n * wmax)) == min_weight_triangle(H)


def test_peripheral_trivial_case():
    G = random_weighted_graph(6, random.Random(2))
    T = random_spanning_tree(G, random.Random(2))
    guesses = list(guess_peripheral(G, T, 5))
    assert len(guesses) == 1 and guesses[0].removed == ()


def test_peripheral_path_count():
    G = build_graph(5, [(i, i + 1, 1) for i in range(4)])
    T = RootedSpanningTree.from_edges(5, [(i, i + 1) for i in range(4)])
    assert len(list(guess_peripheral(G, T, 3))) == 8


def test_peripheral_equivalence(small_random):
    rng = random.Random(5)
    for inst in small_random[:12]:
        G = inst.graph
        T = random_spanning_tree(G, rng)
        for k in (3, 4):
            if k <= G.n:
                assert solve_with_peripheral_guess(G, T, k).value == solve_tight_tree(G, T, k).value
