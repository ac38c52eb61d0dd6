from kcut.bench import benchmark_compare, load_corpus, render_json, render_table
from kcut.corpus import generate_corpus, random_weighted


def test_oracle_vs_oracle():
    res = benchmark_compare(random_weighted(5, 1, 3, 6), ["brute"], ks=[2, 3])
    assert res.rows and all(r.ratio == 1.0 for r in res.rows)


def test_sv_and_randomized_columns():
    instances = random_weighted(12, 2, 3, 7)
    res = benchmark_compare(instances, ["sv2", "randomized"], ks=[2, 3, 4], seeds=2)
    for r in res.rows:
        if r.algorithm == "sv2":
            assert r.ratio <= 2 - 2 / r.k + 1e-12
    rand = [r for r in res.rows if r.algorithm == "randomized"]
    assert sum(r.ratio == 1.0 for r in rand) >= 0.99 * len(rand)


def test_load_corpus_uses_manifest(tmp_path):
    generate_corpus({"random_count": 2, "clique_max_n": 3, "unit_max_n": 3}, 1, str(tmp_path))
    instances = load_corpus(str(tmp_path))
    assert instances and all(inst.meta["oracle"] or inst.graph.n == 1 for inst in instances)
    res = benchmark_compare(instances, ["brute"], ks=[2])
    assert "brute" in render_table(res)
    assert '"rows"' in render_json(res)
