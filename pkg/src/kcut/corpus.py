"""Deterministic test corpora: unit-weight graph families, random weighted graphs
and clique-reduction instances, plus a manifest of brute-force optimum values."""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from ._rng import derive_seed
from .baselines import brute_force_kcut, reduce_clique_to_kcut
from .graph import WeightedGraph, build_graph
from .io import parse_instance, write_graph


@dataclass(frozen=True)
class Instance:
    name: str
    graph: WeightedGraph
    family: str
    meta: dict = field(default_factory=dict, compare=False)


def _atlas_graphs(n: int) -> list[nx.Graph]:
    return [g for g in nx.graph_atlas_g() if g.number_of_nodes() == n]


def unit_graphs(n: int) -> list[Instance]:
    """All connected unit-weight graphs on exactly ``n`` vertices, up to isomorphism."""
    out = []
    for g in _atlas_graphs(n):
        if n == 1 or (g.number_of_edges() and nx.is_connected(g)):
            edges = [(u, v, 1) for u, v in sorted(g.edges())]
            idx = len(out)
            out.append(Instance(f"unit-n{n}-{idx:03d}", build_graph(n, edges), "unit", {"n": n}))
    return out


def unit_family(max_n: int, min_n: int = 2) -> list[Instance]:
    return [inst for n in range(min_n, max_n + 1) for inst in unit_graphs(n)]


def simple_graphs(n: int) -> list[list[tuple[int, int]]]:
    """Edge lists of all simple graphs on ``n`` vertices up to isomorphism (n <= 7)."""
    return [sorted(tuple(sorted(e)) for e in g.edges()) for g in _atlas_graphs(n)]


def random_weighted_graph(n: int, rng: random.Random, w_max: int = 5, p: float | None = None) -> WeightedGraph:
    """Random connected graph: a random spanning tree plus each other pair with probability ``p``."""
    if p is None:
        p = rng.uniform(0.2, 0.9)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = set()
    for i in range(1, n):
        j = rng.randrange(i)
        a, b = perm[i], perm[j]
        pairs.add((min(a, b), max(a, b)))
    for u, v in combinations(range(n), 2):
        if (u, v) not in pairs and rng.random() < p:
            pairs.add((u, v))
    return build_graph(n, [(u, v, rng.randint(1, w_max)) for u, v in sorted(pairs)])


def random_weighted(count: int, seed: int, n_min: int = 3, n_max: int = 8, w_max: int = 5) -> list[Instance]:
    out = []
    for i in range(count):
        rng = random.Random(derive_seed(seed, i))
        n = rng.randint(n_min, n_max)
        out.append(Instance(f"rand-{i:03d}", random_weighted_graph(n, rng, w_max), "random", {"n": n}))
    return out


def random_tree_graph(n: int, rng: random.Random, w_max: int = 5) -> WeightedGraph:
    edges = []
    for i in range(1, n):
        edges.append((rng.randrange(i), i, rng.randint(1, w_max)))
    return build_graph(n, edges)


def clique_reductions(max_n: int, ks=(1, 2, 3)) -> list[Instance]:
    out = []
    for n in range(1, max_n + 1):
        for gi, edges in enumerate(simple_graphs(n)):
            for k in ks:
                if k <= n:
                    G, target = reduce_clique_to_kcut(n, edges, k)
                    out.append(
                        Instance(f"clique-n{n}-{gi:04d}-k{k}", G, "clique", {"h_edges": edges, "k": k, "target": target})
                    )
    return out


def acceptance_corpus(seed: int = 2024) -> list[Instance]:
    """Connected unit graphs with 2..6 vertices plus 100 random weighted graphs (n <= 8, w <= 5)."""
    return unit_family(6) + random_weighted(100, seed, 3, 8, 5)


def write_instance(path: str, G: WeightedGraph, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        write_graph(fh, G, comment=comment)


DEFAULT_SPEC = {
    "unit_max_n": 6,
    "random_count": 100,
    "random_n_max": 10,
    "random_w_max": 5,
    "clique_max_n": 5,
    "ks": [2, 3, 4],
    "oracle_n_max": 10,
}


def generate_corpus(spec: dict | None, seed: int, out_dir: str) -> dict:
    """Write instance files and ``manifest.json`` with brute-force optimum values."""
    spec = {**DEFAULT_SPEC, **(spec or {})}
    os.makedirs(out_dir, exist_ok=True)
    instances = unit_family(spec["unit_max_n"])
    instances += random_weighted(spec["random_count"], seed, 3, spec["random_n_max"], spec["random_w_max"])
    instances += clique_reductions(spec["clique_max_n"])
    entries = []
    for inst in instances:
        fname = f"{inst.name}.txt"
        write_instance(os.path.join(out_dir, fname), inst.graph, inst.family)
        oracle = {}
        if inst.graph.n <= spec["oracle_n_max"]:
            for k in spec["ks"]:
                if k <= inst.graph.n:
                    oracle[str(k)] = brute_force_kcut(inst.graph, k).value
            if inst.family == "clique":
                t = inst.meta["target"]
                oracle[str(t)] = brute_force_kcut(inst.graph, t).value
        entries.append({"name": inst.name, "file": fname, "family": inst.family, "n": inst.graph.n,
                        "m": inst.graph.m, "oracle": oracle, "provenance": "brute_force_kcut"})
    manifest = {"seed": seed, "spec": spec, "instances": entries}
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
    return manifest


def verify_manifest(out_dir: str) -> list[str]:
    """Re-run brute force for every manifest entry; returns mismatching names."""
    with open(os.path.join(out_dir, "manifest.json")) as fh:
        manifest = json.load(fh)
    bad = []
    for entry in manifest["instances"]:
        G, _ = parse_instance(os.path.join(out_dir, entry["file"]))
        for k, value in entry["oracle"].items():
            if brute_force_kcut(G, int(k)).value != value:
                bad.append(entry["name"])
    return bad
