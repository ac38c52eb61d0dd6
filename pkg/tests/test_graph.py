import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcut.graph import (
    GraphError,
    KCutError,
    Partition,
    RootedSpanningTree,
    build_cross_table,
    build_graph,
    cut_weight,
    make_solution,
    tree_cut,
)
from kcut.corpus import random_weighted_graph

from oracles import random_spanning_tree

C4 = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]


def test_build_cycle():
    G = build_graph(4, C4)
    assert G.n == 4 and G.m == 4


def test_parallel_edges_merge():
    G = build_graph(2, [(0, 1, 3), (0, 1, 2)])
    assert G.m == 1 and G.weight(0, 1) == 5


def test_disconnected_names_vertex():
    with pytest.raises(GraphError, match="2"):
        build_graph(3, [(0, 1, 1)])


@pytest.mark.parametrize("edges", [[(0, 0, 1)], [(0, 1, 0)], [(0, 5, 1)]])
def test_bad_edges_rejected(edges):
    with pytest.raises(GraphError):
        build_graph(2, edges)


def test_cut_weight_c4():
    G = build_graph(4, C4)
    assert cut_weight(G, Partition((0, 0, 1, 1), 2)) == 2
    assert cut_weight(G, [0, 0, 0, 0]) == 0


def test_partition_label_range():
    with pytest.raises(KCutError):
        Partition((0, 2, 1), 2)
    G = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(KCutError):
        cut_weight(G, [0, -1, 0])


def test_partition_same_as():
    assert Partition((1, 1, 0), 2).same_as(Partition((0, 0, 1), 2))
    assert not Partition((0, 1, 1), 2).same_as(Partition((0, 0, 1), 2))


@given(st.integers(0, 10**6))
def test_cut_weight_matches_scan(seed):
    rng = random.Random(seed)
    G = random_weighted_graph(8, rng)
    labels = [rng.randrange(3) for _ in range(8)]
    scan = 0
    for u in range(8):
        for v in range(u + 1, 8):
            if labels[u] != labels[v]:
                scan += G.weight(u, v)
    assert cut_weight(G, labels) == scan


def test_tree_cut_path():
    G = build_graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    T = RootedSpanningTree.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    P, value = tree_cut(G, T, [])
    assert P.k == 1 and value == 0
    P, value = tree_cut(G, T, [(1, 2)])
    assert P.same_as(Partition((0, 0, 1, 1), 2)) and value == 1


def test_tree_cut_rejects_non_tree_edge():
    G = build_graph(4, C4)
    T = RootedSpanningTree.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(KCutError):
        tree_cut(G, T, [(3, 0)])


@given(st.integers(0, 10**6))
def test_tree_cut_matches_cut_weight(seed):
    rng = random.Random(seed)
    G = random_weighted_graph(9, rng)
    T = random_spanning_tree(G, rng)
    F = rng.sample(T.edge_pairs(), 3)
    P, value = tree_cut(G, T, F)
    assert P.k == 4
    assert value == cut_weight(G, P)


def test_tree_queries():
    T = RootedSpanningTree.from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4)])
    assert T.is_ancestor(0, 2) and T.is_ancestor(1, 2) and not T.is_ancestor(3, 2)
    assert T.comparable(1, 2) and not T.comparable(2, 4)
    assert sorted(T.subtree(3)) == [3, 4]
    assert T.child_of_edge((1, 0)) == 1
    assert T.incomparable([2, 4]) and not T.incomparable([1, 2])
    with pytest.raises(KCutError):
        RootedSpanningTree.from_edges(4, [(0, 1), (1, 2), (2, 0)])


def test_star_cross_table():
    G = build_graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    T = RootedSpanningTree.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    cross = build_cross_table(G, T)
    assert [int(cross.boundary[v]) for v in (1, 2, 3)] == [1, 1, 1]
    assert cross.pairwise(1, 2) == 0


@pytest.mark.parametrize("eager_limit", [512, 0])
@given(seed=st.integers(0, 10**6))
def test_cross_table_matches_scan(eager_limit, seed):
    rng = random.Random(seed)
    G = random_weighted_graph(8, rng)
    T = random_spanning_tree(G, rng, root=rng.randrange(8))
    cross = build_cross_table(G, T, eager_limit=eager_limit)
    for v in range(8):
        inside = set(T.subtree(v))
        scan = sum(w for a, b, w in G.edges if (a in inside) != (b in inside))
        assert cross.boundary[v] == scan
    for u in range(8):
        for v in range(8):
            if not T.comparable(u, v):
                Su, Sv = set(T.subtree(u)), set(T.subtree(v))
                scan = sum(w for a, b, w in G.edges if (a in Su and b in Sv) or (a in Sv and b in Su))
                assert cross.pairwise(u, v) == scan


def test_make_solution_verifies():
    G = build_graph(4, C4)
    sol = make_solution(G, [0, 0, 1, 1], "test")
    assert sol.value == 2 and sol.k == 2 and sol.verify(G)
