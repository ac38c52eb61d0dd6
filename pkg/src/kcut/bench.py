"""Solver comparison against brute-force optima, used by ``kcut bench``."""

from __future__ import annotations

import json
import os
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Sequence

from ._rng import derive_seed
from .baselines import brute_force_kcut
from .corpus import Instance
from .io import parse_instance


@dataclass
class BenchRow:
    instance: str
    algorithm: str
    k: int
    seed: int
    value: int
    oracle: int
    ms: float

    @property
    def ratio(self) -> float:
        return self.value / self.oracle if self.oracle else (1.0 if self.value == 0 else float("inf"))


@dataclass
class BenchResult:
    rows: list[BenchRow] = field(default_factory=list)

    def summary(self) -> dict[str, dict]:
        out: dict[str, dict] = {}
        for r in self.rows:
            s = out.setdefault(r.algorithm, {"runs": 0, "exact": 0, "worst_ratio": 1.0, "total_ms": 0.0})
            s["runs"] += 1
            s["exact"] += r.value == r.oracle
            s["worst_ratio"] = max(s["worst_ratio"], r.ratio)
            s["total_ms"] += r.ms
        return out


def load_corpus(directory: str) -> list[Instance]:
    """Instances listed in ``manifest.json``; stored optima travel in ``meta['oracle']``."""
    with open(os.path.join(directory, "manifest.json")) as fh:
        manifest = json.load(fh)
    out = []
    for entry in manifest["instances"]:
        G, _ = parse_instance(os.path.join(directory, entry["file"]))
        oracle = {int(k): v for k, v in entry.get("oracle", {}).items()}
        out.append(Instance(entry["name"], G, entry.get("family", ""), {"oracle": oracle}))
    return out


def _row_seed(base: int, name: str, algorithm: str, rep: int) -> int:
    return derive_seed(base, zlib.crc32(name.encode()), zlib.crc32(algorithm.encode()), rep)


def benchmark_compare(
    instances: Sequence[Instance],
    algorithms: Sequence[str],
    ks: Sequence[int] = (2, 3),
    seeds: int = 1,
    base_seed: int = 0,
    epsilon: float = 0.5,
) -> BenchResult:
    from .cli import _solve

    result = BenchResult()
    for inst in instances:
        G = inst.graph
        stored = inst.meta.get("oracle", {})
        for k in ks:
            if k > G.n:
                continue
            oracle = stored.get(k)
            if oracle is None:
                oracle = brute_force_kcut(G, k).value
            for alg in algorithms:
                reps = seeds if alg in ("karger-stein", "randomized", "ptas") else 1
                params = {"epsilon": epsilon} if alg == "ptas" else {}
                for rep in range(reps):
                    seed = _row_seed(base_seed, inst.name, alg, rep)
                    start = time.perf_counter()
                    sol = _solve(alg, G, k, seed, params)
                    ms = (time.perf_counter() - start) * 1000.0
                    result.rows.append(BenchRow(inst.name, alg, k, seed, int(sol.value), int(oracle), round(ms, 3)))
    return result


def render_table(result: BenchResult) -> str:
    lines = [f"{'algorithm':<14}{'runs':>6}{'exact':>7}{'worst':>8}{'ms/run':>10}"]
    for alg, s in result.summary().items():
        per = s["total_ms"] / s["runs"]
        lines.append(f"{alg:<14}{s['runs']:>6}{s['exact']:>7}{s['worst_ratio']:>8.3f}{per:>10.2f}")
    return "\n".join(lines)


def render_json(result: BenchResult) -> str:
    rows = [{**asdict(r), "ratio": r.ratio} for r in result.rows]
    return json.dumps({"summary": result.summary(), "rows": rows}, indent=1)
