"""Command-line front end: ``kcut solve``, ``kcut corpus`` and ``kcut bench``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from typing import Sequence

from .graph import KCutError, KCutSolution, Partition, WeightedGraph, cut_weight
from .io import ParseError, parse_instance

ALGORITHMS = ("brute", "karger-stein", "sv2", "randomized", "deterministic", "ptas")
FIELDS = ("instance", "n", "m", "k", "algorithm", "seed", "value", "labels", "ms", "params")


def _solve(algorithm: str, G: WeightedGraph, k: int, seed: int, params: dict) -> KCutSolution:
    from . import approx, baselines, deterministic, pipeline

    if algorithm == "brute":
        return baselines.brute_force_kcut(G, k)
    if algorithm == "karger-stein":
        return baselines.karger_stein(G, k, seed, params.get("repetitions"))
    if algorithm == "sv2":
        return baselines.sv_two_approx(G, k)
    if algorithm == "randomized":
        return pipeline.solve_randomized(
            G, k, seed,
            tree_count=params.get("trees"),
            refine_budget=params.get("refine_budget"),
            guess_rounds=params.get("guess_rounds"),
        )
    if algorithm == "deterministic":
        if k == 1:
            return KCutSolution(Partition((0,) * G.n, 1), 0, "deterministic")
        return deterministic.solve_deterministic_full(G, k, params.get("trees"))
    if algorithm == "ptas":
        return approx.solve_ptas(
            G, k, params["epsilon"], seed,
            tree_count=params.get("trees"),
            refine_budget=params.get("refine_budget"),
        )
    raise KCutError(f"unknown algorithm {algorithm!r}")


def solve_record(name: str, G: WeightedGraph, k: int, algorithm: str, seed: int, params: dict) -> dict:
    """Run one solver and return a report with the fixed field set."""
    start = time.perf_counter()
    sol = _solve(algorithm, G, k, seed, params)
    ms = (time.perf_counter() - start) * 1000.0
    labels = list(sol.labels)
    value = int(sol.value)
    if cut_weight(G, labels) != value:
        raise AssertionError(f"{algorithm} reported {value} but its labels cut {cut_weight(G, labels)}")
    echoed = {key: params[key] for key in sorted(params) if params[key] is not None}
    if "bound" in sol.info:
        echoed["bound"] = float(sol.info["bound"])
    record = {
        "instance": name, "n": G.n, "m": G.m, "k": k, "algorithm": algorithm, "seed": seed,
        "value": value, "labels": labels, "ms": round(ms, 3), "params": echoed,
    }
    return {f: record[f] for f in FIELDS}


def format_tsv(records: Sequence[dict], header: bool = True) -> str:
    lines = ["\t".join(FIELDS)] if header else []
    for r in records:
        cells = []
        for f in FIELDS:
            v = r[f]
            if f == "labels":
                v = ",".join(str(x) for x in v)
            elif f == "params":
                v = json.dumps(v, sort_keys=True)
            cells.append(str(v))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def run_solver(args: argparse.Namespace) -> list[dict]:
    """Solve every instance file named in ``args`` and return the records."""
    if args.epsilon is not None and args.algorithm != "ptas":
        warnings.warn("--epsilon only applies to --algorithm ptas; ignoring it", stacklevel=2)
    if args.algorithm == "ptas" and args.epsilon is None:
        raise KCutError("--algorithm ptas requires --epsilon")
    params = {
        "trees": args.trees,
        "refine_budget": args.refine_budget,
        "guess_rounds": args.guess_rounds,
    }
    if args.algorithm == "ptas":
        params["epsilon"] = args.epsilon
    records = []
    for path in args.instances:
        G, k_file = parse_instance(path)
        k = args.k if args.k is not None else k_file
        if k is None:
            raise KCutError(f"{path}: no k given (use --k or an 'n m k' header)")
        name = os.path.splitext(os.path.basename(path))[0]
        records.append(solve_record(name, G, k, args.algorithm, args.seed, params))
    return records


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kcut", description="Minimum k-cut solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve instance files")
    solve.add_argument("instances", nargs="+", help="graph files ('n m [k]' header, then 'u v w' lines)")
    solve.add_argument("--algorithm", "-a", required=True, choices=ALGORITHMS)
    solve.add_argument("--k", type=int, help="number of parts (overrides the file header)")
    solve.add_argument("--epsilon", type=float, help="accuracy for --algorithm ptas")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--trees", type=int, help="tree packing size")
    solve.add_argument("--refine-budget", type=int, help="refinement walks per level")
    solve.add_argument("--guess-rounds", type=int, help="random guesses per tight-tree state")
    solve.add_argument("--format", choices=("json", "tsv"), default="json")

    corpus = sub.add_parser("corpus", help="write the test corpus and its manifest")
    corpus.add_argument("out_dir")
    corpus.add_argument("--seed", type=int, default=2024)
    corpus.add_argument("--random-count", type=int)
    corpus.add_argument("--clique-max-n", type=int)
    corpus.add_argument("--verify", action="store_true", help="re-check an existing manifest instead")

    bench = sub.add_parser("bench", help="compare solvers against brute force")
    bench.add_argument("corpus_dir", nargs="?", help="corpus directory (default: built-in acceptance corpus)")
    bench.add_argument("--algorithms", default="sv2,randomized,deterministic,ptas")
    bench.add_argument("--ks", default="2,3")
    bench.add_argument("--seeds", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--epsilon", type=float, default=0.5)
    bench.add_argument("--limit", type=int, help="use only the first N instances")
    bench.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            records = run_solver(args)
            if args.format == "json":
                for r in records:
                    print(json.dumps(r))
            else:
                sys.stdout.write(format_tsv(records))
        elif args.command == "corpus":
            from .corpus import generate_corpus, verify_manifest

            if args.verify:
                bad = verify_manifest(args.out_dir)
                print(f"{len(bad)} mismatches" + (": " + ", ".join(bad) if bad else ""))
                return 1 if bad else 0
            spec = {}
            if args.random_count is not None:
                spec["random_count"] = args.random_count
            if args.clique_max_n is not None:
                spec["clique_max_n"] = args.clique_max_n
            manifest = generate_corpus(spec, args.seed, args.out_dir)
            print(f"wrote {len(manifest['instances'])} instances to {args.out_dir}")
        elif args.command == "bench":
            from .bench import benchmark_compare, load_corpus, render_json, render_table
            from .corpus import acceptance_corpus

            instances = load_corpus(args.corpus_dir) if args.corpus_dir else acceptance_corpus()
            if args.limit:
                instances = instances[: args.limit]
            result = benchmark_compare(
                instances,
                args.algorithms.split(","),
                ks=[int(x) for x in args.ks.split(",")],
                seeds=args.seeds,
                base_seed=args.seed,
                epsilon=args.epsilon,
            )
            print(render_json(result) if args.format == "json" else render_table(result))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
