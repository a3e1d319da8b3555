"""The ten acceptance criteria, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines as
they happen; they are also repeated in the terminal summary.
"""

import json
import random
import time
import warnings

import numpy as np
import pytest

from acceptance_log import criterion
from oracles import (
    best_modularity,
    betweenness_by_enumeration,
    cooccurrence_by_pairs,
    modularity_of,
    random_connected_graph,
)
from sbskit.cli import main
from sbskit.config import RunConfig
from sbskit.constructs import default_lexicon_path
from sbskit.demo import MARKER_ONE, MARKER_TWO, TEAMWORK
from sbskit.pipeline import analyze
from sbskit.sbs import (
    DegenerateDistributionWarning,
    connectivity_map,
    diversity_map,
    score_all,
    standardize,
)
from sbskit.semnet import SemanticNetwork, build_network
from sbskit.textprep import stem
from sbskit.topics import louvain, modularity


def random_network(rng, n_max=20):
    nodes, edges = random_connected_graph(rng, rng.randint(3, n_max))
    freq = {v: rng.randint(1, 40) for v in nodes}
    return SemanticNetwork.from_edges(edges, freq)


def scaled(net, lam):
    return SemanticNetwork.from_edges(((a, b, w * lam) for a, b, w in net.edges()), net.frequencies)


def test_1_betweenness_oracle():
    with criterion(1, "betweenness matches path enumeration on 200 graphs (1e-9, < 30 s)"):
        rng = random.Random(101)
        t0 = time.perf_counter()
        for _ in range(200):
            nodes, edges = random_connected_graph(rng, rng.randint(2, 8))
            got = connectivity_map(SemanticNetwork.from_edges(edges))
            want = betweenness_by_enumeration(nodes, edges)
            for v in nodes:
                assert abs(got[v] - want[v]) <= 1e-9, (v, got[v], want[v], edges)
        elapsed = time.perf_counter() - t0
        assert elapsed < 30, f"took {elapsed:.1f}s"


def test_2_diversity_fixtures():
    with criterion(2, "star centre 3*log10(3), leaves 0, isolated node 0 (1e-12)"):
        star = SemanticNetwork.from_edges([("c", "x", 1), ("c", "y", 2), ("c", "z", 5)])
        d = diversity_map(star)
        assert abs(d["c"] - 3 * np.log10(3)) <= 1e-12
        assert d["x"] == d["y"] == d["z"] == 0.0
        lonely = SemanticNetwork.from_edges([("c", "x", 1), ("c", "y", 1), ("c", "z", 1)], {"iso": 3})
        d = diversity_map(lonely)
        assert d["iso"] == 0.0
        assert abs(d["c"] - 3 * np.log10(4 / 1)) <= 1e-12


def test_3_standardization():
    with criterion(3, "z maps have mean 0 and population std 1 (1e-9); degenerate maps warn and give zeros"):
        rng = random.Random(303)
        checked = 0
        for _ in range(50):
            net = random_network(rng)
            maps = {
                "prevalence": {v: net.frequency(v) for v in net.nodes},
                "diversity": diversity_map(net),
                "connectivity": connectivity_map(net),
            }
            for name, values in maps.items():
                arr = np.array(list(values.values()))
                if arr.max() == arr.min():
                    continue
                z = np.array(list(standardize(values, name).values()))
                assert abs(z.mean()) < 1e-9
                assert abs(z.std() - 1) < 1e-9
                checked += 1
        assert checked >= 100
        triangle = SemanticNetwork.from_edges([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)], {"a": 2, "b": 2, "c": 2})
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table = score_all(triangle)
        degenerate = [w for w in caught if issubclass(w.category, DegenerateDistributionWarning)]
        assert len(degenerate) == 3
        for s in table.values():
            assert (s.prevalence_z, s.diversity_z, s.connectivity_z, s.sbs) == (0.0, 0.0, 0.0, 0.0)


def test_4_composition_and_scaling():
    with criterion(4, "sbs is the sum of z components (1e-12); weight scaling leaves components bit-equal"):
        rng = random.Random(404)
        for _ in range(50):
            net = random_network(rng)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateDistributionWarning)
                base = score_all(net)
                for s in base.values():
                    assert abs(s.sbs - (s.prevalence_z + s.diversity_z + s.connectivity_z)) <= 1e-12
                order = sorted(base, key=lambda v: (-base[v].sbs, v))
                for lam in (0.5, 2, 10):
                    other = score_all(scaled(net, lam))
                    for v, s in base.items():
                        assert other[v].connectivity_z == s.connectivity_z
                        assert other[v].diversity_z == s.diversity_z
                        assert other[v].prevalence_z == s.prevalence_z
                    assert sorted(other, key=lambda v: (-other[v].sbs, v)) == order


def test_5_porter_reference():
    from test_textprep import porter_pairs

    with criterion(5, "Porter stemmer agrees with the reference vocabulary on every word"):
        pairs = porter_pairs()
        wrong = [(w, s, stem(w)) for w, s in pairs if stem(w) != s]
        assert len(pairs) > 20000
        assert not wrong, wrong[:10]


def test_6_cooccurrence_builder():
    with criterion(6, "co-occurrence weights equal position-pair enumeration on 100 sequences"):
        rng = random.Random(606)
        vocab = [f"w{i}" for i in range(10)]
        for i in range(100):
            window = (2, 3, 7)[i % 3]
            tokens = [rng.choice(vocab[: rng.randint(1, 10)]) for _ in range(rng.randint(0, 50))]
            net = build_network([tokens], window)
            got = {frozenset((a, b)): w for a, b, w in net.edges()}
            assert got == cooccurrence_by_pairs([tokens], window)


def test_7_louvain_fixture():
    with criterion(7, "two 4-cliques plus a bridge split in two for seeds 1..10 at the exhaustive optimum (1e-9)"):
        left, right = ["a1", "a2", "a3", "a4"], ["b1", "b2", "b3", "b4"]
        edges = [(a, b, 1) for grp in (left, right) for i, a in enumerate(grp) for b in grp[i + 1:]]
        edges.append(("a4", "b1", 1))
        net = SemanticNetwork.from_edges(edges)
        best_q, _ = best_modularity(left + right, edges)
        for seed in range(1, 11):
            first = louvain(net, seed=seed)
            assert louvain(net, seed=seed) == first
            blocks = {}
            for node, c in first.items():
                blocks.setdefault(c, set()).add(node)
            assert sorted(map(sorted, blocks.values())) == [left, right]
            q = modularity(net, first)
            assert abs(q - best_q) <= 1e-9
            assert abs(q - modularity_of(left + right, edges, list(blocks.values()))) <= 1e-9


@pytest.fixture(scope="module")
def augmented_lexicon(tmp_path_factory):
    path = tmp_path_factory.mktemp("lex") / "augmented.lex"
    extra = f"""

[[construct]]
name = "Planted Absent"
terms = ["zyzzyvas", "quuxlike"]

[[construct]]
name = "Two Percent Marker"
terms = ["{MARKER_TWO}"]

[[construct]]
name = "Half Percent Marker"
terms = ["{MARKER_ONE}"]
"""
    path.write_text(default_lexicon_path().read_text(encoding="utf-8") + extra, encoding="utf-8")
    return path


def test_8_demo_pipeline(augmented_lexicon, tmp_path):
    with criterion(8, "Teamwork/Citizenship ranks #1 on the demo corpus; coverage threshold is inclusive at 1%"):
        cfg = RunConfig({"constructs": {"lexicon": str(augmented_lexicon)}, "output": {"dir": str(tmp_path)}})
        result = analyze(cfg)
        assert result.ranking[0].target == TEAMWORK
        sel = result.selection
        assert sel.dropped == {"Planted Absent", "Half Percent Marker"}
        assert "Two Percent Marker" in sel.kept
        assert len(sel.kept) == 29
        cov = result.results.extra["constructs"]["coverage"]
        assert cov["Two Percent Marker"] == 0.01
        assert cov["Half Percent Marker"] == 0.005
        assert cov["Planted Absent"] == 0.0


def _analyze_files(out_dir, threads):
    code = main(["analyze", "--out", str(out_dir), "--threads", str(threads), "-q"])
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    return {name: (out_dir / name).read_bytes() for name in [*manifest["files"], "manifest.json"]}


def test_9_determinism(tmp_path, capsys):
    with criterion(9, "analyze twice at 1 and at 8 threads gives byte-identical outputs"):
        runs = {(t, k): _analyze_files(tmp_path / f"t{t}_{k}", t) for t in (1, 8) for k in (0, 1)}
        capsys.readouterr()
        reference = runs[(1, 0)]
        assert {n for n in reference if n.endswith((".csv", ".json"))} >= {"sbs_scores.csv", "topics.json", "manifest.json"}
        for key, files in runs.items():
            assert files == reference, key


def test_10_full_demo_runtime(tmp_path, capsys):
    with criterion(10, "full demo run (28 constructs, ~2k nodes, topics, reports) under 60 s"):
        t0 = time.perf_counter()
        code = main(["analyze", "--facet", "region", "--out", str(tmp_path), "-q"])
        elapsed = time.perf_counter() - t0
        capsys.readouterr()
        assert code == 0
        assert elapsed < 60, f"took {elapsed:.1f}s"
        rows = (tmp_path / "sbs_scores.csv").read_text().splitlines()
        assert len(rows) == 1 + 28
        topics = json.loads((tmp_path / "topics.json").read_text())
        n_nodes = sum(c["size"] for c in topics["clusters"])
        assert 1500 <= n_nodes <= 2500
        for name in ("construct_comparison.csv", "heatmap_region.csv", "heatmap_region.svg", "network.dot"):
            assert (tmp_path / name).exists()
