"""Time the compiled kernels against the pure-Python fallback.

Every kernel runs on identical inputs under both backends; the outputs are
compared before any timing is reported, so a speedup line also certifies
that the two backends agree on that workload.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import timeit

import numpy as np

from kcut import _pykernels
from kcut._backend import compiled_kernels
from kcut.corpus import random_weighted_graph


def _graph_arrays(n: int, seed: int, p: float = 0.5):
    G = random_weighted_graph(n, random.Random(seed), w_max=9, p=p)
    eu = np.array([e[0] for e in G.edges], dtype=np.int64)
    ev = np.array([e[1] for e in G.edges], dtype=np.int64)
    ew = np.array([e[2] for e in G.edges], dtype=np.int64)
    return G, eu, ev, ew


def _spanning_ids(G) -> list[int]:
    # BFS tree from vertex 0, reported as edge ids
    seen = {0}
    ids = []
    frontier = [0]
    index = {}
    for i, (u, v, _) in enumerate(G.edges):
        index.setdefault((u, v), i)
        index.setdefault((v, u), i)
    while frontier:
        x = frontier.pop()
        for y in range(G.n):
            if y not in seen and (x, y) in index:
                seen.add(y)
                ids.append(index[(x, y)])
                frontier.append(y)
    return ids


def workloads():
    rng = np.random.default_rng(7)
    a = 40
    w = [rng.integers(0, 50, size=(a, a), dtype=np.int64) for _ in range(3)]
    m = [(rng.random((a, a)) < 0.6).astype(np.uint8) for _ in range(3)]
    yield "triangle_min 40^3", "triangle_min", (*w, *m)

    G, eu, ev, ew = _graph_arrays(11, 1)
    yield "rgs_min_kcut n=11 k=3", "rgs_min_kcut", (G.matrix, 3)

    G, eu, ev, ew = _graph_arrays(30, 2, p=0.3)
    seeds = np.arange(1, 201, dtype=np.uint64)
    yield "karger_batch n=30 x200", "karger_batch", (G.n, eu, ev, ew, 3, seeds)

    tree = np.array(_spanning_ids(G), dtype=np.int64)
    yield "refine_walks n=30 x50 len=40", "refine_walks", (G.n, eu, ev, ew, tree, 40, seeds[:50])

    G, *_ = _graph_arrays(60, 3, p=0.3)
    yield "stoer_wagner n=60", "stoer_wagner", (G.matrix,)


def _same(x, y) -> bool:
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return np.array_equal(np.asarray(x), np.asarray(y))
    if isinstance(x, (tuple, list)) and isinstance(y, (tuple, list)):
        return len(x) == len(y) and all(_same(a, b) for a, b in zip(x, y))
    return x == y


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the results to this file")
    args = ap.parse_args(argv)

    compiled = compiled_kernels()
    if compiled is None:
        print("compiled extension not built; only the Python backend is available", file=sys.stderr)
        return 1

    rows = []
    print(f"{'workload':<30}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for label, name, inputs in workloads():
        py_fn, c_fn = getattr(_pykernels, name), getattr(compiled, name)
        if not _same(py_fn(*inputs), c_fn(*inputs)):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 2
        py_t = min(timeit.repeat(lambda: py_fn(*inputs), number=1, repeat=args.repeat)) * 1000
        c_t = min(timeit.repeat(lambda: c_fn(*inputs), number=1, repeat=args.repeat)) * 1000
        rows.append({"workload": label, "python_ms": py_t, "cython_ms": c_t, "speedup": py_t / c_t})
        print(f"{label:<30}{py_t:>12.2f}{c_t:>12.3f}{py_t / c_t:>9.1f}x")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
