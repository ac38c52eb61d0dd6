"""End-to-end acceptance checks against brute-force and exhaustive oracles.

Each test covers one numbered criterion and records a one-line verdict that
the terminal summary prints at the end of the run. The corpus is every
connected unit-weight graph on 2..6 vertices plus 100 seeded random weighted
graphs on 3..8 vertices with weights in 1..5.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from kcut.approx import (
    compute_dp_tables,
    compute_important_nodes,
    contract_heavy_edges,
    default_parameters,
    estimate_M,
    exact_dp,
    important_node_violations,
    make_pvc,
    pvc_approx,
    pvc_exact,
    small_dp,
    solve_ptas,
)
from kcut.baselines import brute_force_kcut, extract_clique, has_clique, reduce_clique_to_kcut, sv_two_approx
from kcut.corpus import random_tree_graph, random_weighted_graph, simple_graphs
from kcut.deterministic import first_t_tree, solve_deterministic
from kcut.graph import tree_cut_children
from kcut.packing import crossing_number, default_tree_count, greedy_tree_packing, sample_candidate_indices
from kcut.pipeline import cached_packing, default_pipeline_tree_count, solve_randomized
from kcut.refine import refine_to_tight_ids
from kcut.tight import build_incomparable_aux, compute_states, default_guess_rounds

from oracles import random_incomparable_set, random_spanning_tree, state_oracle, triangle_weights_for_set

pytestmark = pytest.mark.acceptance

KS = (2, 3, 4)


@pytest.fixture(scope="module")
def optima(corpus):
    """Brute-force optimum per (instance index, k), shared by the criteria."""
    out = {}
    for i, inst in enumerate(corpus):
        for k in KS:
            if k <= inst.graph.n:
                out[i, k] = brute_force_kcut(inst.graph, k)
    return out


def _cases(corpus, optima):
    for (i, k), opt in optima.items():
        yield corpus[i], k, opt


def _crossing_ids(G, labels, ids) -> int:
    lab = np.asarray(labels)
    eu, ev, _ = G.edge_arrays
    return int((lab[eu] != lab[ev])[list(ids)].sum())


def test_criterion_01_oracle_exactness(corpus, optima, report):
    start = time.perf_counter()
    seeds = 50
    det_bad, worst, runs, misses = [], 1.0, 0, 0
    for inst, k, opt in _cases(corpus, optima):
        G = inst.graph
        T = first_t_tree(G, opt.partition, k)
        if T is None or solve_deterministic(G, T, k).value != opt.value:
            det_bad.append((inst.name, k))
        cache: dict = {}
        hits = sum(solve_randomized(G, k, seed, cache=cache).value == opt.value for seed in range(seeds))
        runs += seeds
        misses += seeds - hits
        worst = min(worst, hits / seeds)
    elapsed = time.perf_counter() - start
    ok = not det_bad and worst >= 0.99 and elapsed < 600
    report(1, ok, f"deterministic mismatches {len(det_bad)}; randomized misses {misses}/{runs}, "
                  f"worst per-instance rate {worst:.2f}; {elapsed:.0f}s")
    assert not det_bad, det_bad[:5]
    assert worst >= 0.99
    assert elapsed < 600


def test_criterion_02_triangle_identity(report):
    rng = random.Random(2)
    draws = bad = 0
    while draws < 1000:
        k = rng.randint(2, 5)
        G = random_weighted_graph(rng.randint(k, 9), rng)
        T = random_spanning_tree(G, rng, root=rng.randrange(G.n))
        S = random_incomparable_set(T, k - 1, rng)
        if S is None:
            continue
        draws += 1
        weights = triangle_weights_for_set(build_incomparable_aux(G, T, k), S)
        bad += not weights or set(weights) != {tree_cut_children(G, T, S)[1]}
    report(2, bad == 0, f"{bad}/{draws} draws where triangle weight != tree cut value")
    assert bad == 0


def test_criterion_03_packing_crossings(corpus, optima, report):
    failures, checked = [], 0
    for inst in corpus[::12][:20]:
        G = inst.graph
        for k in KS:
            if k > G.n:
                continue
            P = optima[corpus.index(inst), k].partition
            packing = greedy_tree_packing(G, default_tree_count(G, k))
            assert len(packing) <= 5000
            cross = [crossing_number(T, P) for T in packing.trees]
            checked += 1
            if not (sum(cross) / len(cross) < 2 * (k - 1 + 0.25) and min(cross) <= 2 * k - 2):
                failures.append((inst.name, k))
    report(3, not failures, f"{len(failures)}/{checked} (instance, k) pairs violate mean or min crossing")
    assert not failures


def test_criterion_04_refinement(corpus, optima, report):
    seeds = 4
    worst, runs, misses = 1.0, 0, 0
    for inst, k, opt in _cases(corpus, optima):
        G = inst.graph
        P = opt.partition
        packing = cached_packing(G, default_pipeline_tree_count(G, k))
        start = next(
            packing.tree_edge_ids[i]
            for i in sample_candidate_indices(packing, len(packing), 7)
            if crossing_number(packing.trees[i], P) <= 2 * k - 2
        )
        budget = 50 * G.n * k * k
        hits = 0
        for seed in range(seeds):
            outs = refine_to_tight_ids(G, list(start), k, budget, seed)
            hits += any(_crossing_ids(G, P.labels, ids) == k - 1 for ids in outs)
        runs += seeds
        misses += seeds - hits
        worst = min(worst, hits / seeds)
    report(4, worst >= 0.99, f"{misses}/{runs} runs without a tight tree, worst per-instance rate {worst:.2f}")
    assert worst >= 0.99


def test_criterion_05_state_optimality(corpus, report):
    rng = random.Random(5)
    bad = total = 0
    for inst in corpus:
        G = inst.graph
        for k in KS:
            if k > G.n:
                continue
            T = random_spanning_tree(G, rng, rng.randrange(G.n))
            tables = [compute_states(G, T, k)]
            tables.append(compute_states(G, T, k, seed=1, guess_rounds=default_guess_rounds(G.n, k)))
            for e in T.tree_vertices():
                if T.subtree_size(e) > 12:
                    continue
                for s in range(1, k):
                    want = state_oracle(G, T, e, s)
                    for tab in tables:
                        total += 1
                        bad += tab.get(e, s) != want
    report(5, bad == 0, f"{bad}/{total} states differ from the subset oracle")
    assert bad == 0


def test_criterion_06_dp_sandwiches(corpus, optima, report):
    small_bad = small_total = 0
    for inst, k, opt in _cases(corpus, optima):
        G = inst.graph
        T = first_t_tree(G, opt.partition, k)
        ex = exact_dp(G, T, k)
        M = estimate_M(G, k)
        for W in (default_parameters(0.5, k, M)[0], Fraction(1, 2), 2):
            I = compute_important_nodes(G, T, W)
            for (v, s, R), (val, _) in small_dp(G, T, k, I).items():
                lows = [
                    x for (vv, ss, U), x in ex.items()
                    if vv == v and ss == s and I.sigma(v, set().union(*(T.subtree(u) for u in U))).nodes == R
                ]
                small_total += 1
                small_bad += not (lows and min(lows) <= val <= min(lows) + (8 * s - 4) * k * k * W)

    runs = bad_runs = states = 0
    for inst in corpus[::8]:
        G = inst.graph
        for k in (3, 4):
            if k > G.n:
                continue
            T = first_t_tree(G, brute_force_kcut(G, k).partition, k)
            M = estimate_M(G, k)
            W0, d0 = default_parameters(0.5, k, M)
            settings = [(W0, float(d0), "exact", 0, None)]
            settings += [(Fraction(1, 2), 0.25, pvc, 0, 0) for pvc in ("exact", "approx")]
            for W, delta, pvc, seed, limit in settings:
                kwargs = {} if limit is None else {"guess_limit": limit}
                tb = compute_dp_tables(G, T, k, W, delta=delta, seed=seed, pvc=pvc, exact=False, **kwargs)
                ok = tb.poly is not None and set(tb.poly) == set(tb.small)
                for key, (pv, _) in (tb.poly or {}).items():
                    sv = tb.small[key][0]
                    states += 1
                    ok &= sv <= pv <= sv + (8 * key[1] - 4) * tb.params["delta"] * k * tb.params["M"]
                runs += 1
                bad_runs += not ok
    rate = 1 - bad_runs / runs
    ok = small_bad == 0 and rate >= 0.99
    report(6, ok, f"small DP {small_bad}/{small_total} states outside the bound; "
                  f"poly DP {bad_runs}/{runs} runs ({states} states) outside the bound")
    assert small_bad == 0
    assert rate >= 0.99


def test_criterion_07_ptas_ratio(corpus, optima, report):
    runs = bad = 0
    for inst, k, opt in _cases(corpus, optima):
        for eps in (0.25, 0.5, 1.0):
            cache: dict = {}
            for seed in range(2):
                v = solve_ptas(inst.graph, k, eps, seed, cache=cache).value
                runs += 1
                bad += not opt.value <= v <= (1 + eps) * opt.value
    rng = random.Random(7)
    tree_bad = tree_runs = 0
    for _ in range(20):
        G = random_tree_graph(rng.randint(3, 8), rng)
        for k in range(2, min(4, G.n) + 1):
            want = brute_force_kcut(G, k).value
            for eps in (0.25, 0.5, 1.0):
                tree_runs += 1
                tree_bad += solve_ptas(G, k, eps, 0).value != want
    rate = 1 - bad / runs
    report(7, rate >= 0.99 and tree_bad == 0,
           f"{bad}/{runs} corpus runs outside [opt, (1+eps) opt]; {tree_bad}/{tree_runs} tree runs inexact")
    assert rate >= 0.99
    assert tree_bad == 0


def test_criterion_08_important_nodes(corpus, optima, report):
    rng = random.Random(8)
    bad = total = 0
    for inst, k, opt in _cases(corpus, optima):
        G = inst.graph
        M = estimate_M(G, k)
        trees = [first_t_tree(G, opt.partition, k), random_spanning_tree(G, rng, rng.randrange(G.n))]
        widths = [default_parameters(e, k, M)[0] for e in (0.25, 0.5, 1.0)]
        widths += [Fraction(1, 2), 1, 2, Fraction(max(M, 1), 4)]
        for T in trees:
            # the construction assumes no tree edge is heavier than M on its own
            inst_c = contract_heavy_edges(G, T, M)
            for W in widths:
                total += 1
                bad += bool(important_node_violations(compute_important_nodes(inst_c.graph, inst_c.tree, W), M))
    report(8, bad == 0, f"{bad}/{total} (tree, W) cases violate P1-P4 or the size bound")
    assert bad == 0


def test_criterion_09_clique_round_trip(report):
    disagreements = total = 0
    for n in range(1, 8):
        for h in simple_graphs(n):
            for k in range(1, min(4, n) + 1):
                G, target = reduce_clique_to_kcut(n, h, k)
                found = extract_clique(G, solve_randomized(G, target, seed=0), k) is not None
                total += 1
                disagreements += found != has_clique(n, h, k)
    report(9, disagreements == 0, f"{disagreements}/{total} (H, k) pairs disagree with exhaustive search")
    assert disagreements == 0


def test_criterion_10_baselines(corpus, optima, report):
    sv_bad = 0
    for inst, k, opt in _cases(corpus, optima):
        v = sv_two_approx(inst.graph, k).value
        sv_bad += v > (2 - 2 / k) * opt.value

    rng = random.Random(10)
    delta = 0.25
    pvc_bad = ell1_bad = 0
    trials = 200
    for i in range(trials):
        n = rng.randint(5, 15)
        nodes = [rng.randint(0, 20) for _ in range(n)]
        E = np.zeros((n, n), dtype=np.int64)
        for a, b in combinations(range(n), 2):
            if rng.random() < 0.4:
                E[a, b] = E[b, a] = rng.randint(1, 10)
        H = make_pvc(nodes, E)
        ell = rng.randint(1, 4)
        pvc_bad += pvc_approx(H, ell, delta, seed=i)[1] > (1 + delta) * pvc_exact(H, ell)[1]
        ell1_bad += pvc_approx(H, 1, delta, seed=i)[1] != pvc_exact(H, 1)[1]
    rate = 1 - pvc_bad / trials
    ok = sv_bad == 0 and rate >= 0.99 and ell1_bad == 0
    report(10, ok, f"sv2 over 2-2/k on {sv_bad} instances; pvc approx over 1+delta on {pvc_bad}/{trials}; "
                   f"l=1 inexact on {ell1_bad}")
    assert sv_bad == 0
    assert rate >= 0.99
    assert ell1_bad == 0
