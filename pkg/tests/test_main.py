import json

import pytest

from lks.extremal import spider, tight_construction
from lks.formats import graph_to_graph6, tree_to_text
from lks.graph_core import Graph, Tree
from main import EXIT_FOUND, EXIT_INPUT_ERROR, EXIT_NOT_FOUND, main


@pytest.fixture
def tree_file(tmp_path):
    def write(t: Tree, name: str = "tree.txt"):
        path = tmp_path / name
        path.write_text(tree_to_text(t), encoding="utf-8")
        return str(path)
    return write


def run(tmp_path, *argv):
    return main(["--quiet", "--output-dir", str(tmp_path / "out"), *argv])


def load(tmp_path, name):
    return json.loads((tmp_path / "out" / name).read_text(encoding="utf-8"))


class TestEmbed:
    def test_path_in_complete_graph(self, tmp_path, tree_file):
        code = run(tmp_path, "embed", graph_to_graph6(Graph.complete(7)), tree_file(Tree.path(6)), "6")
        assert code == EXIT_FOUND
        report = load(tmp_path, "embed.json")
        assert report["schema_version"] == 1 and report["verified"]
        assert report["result"]["status"] == "EMBEDDED"
        assert report["result"]["method"] == "diam5"

    def test_hypothesis_failure(self, tmp_path, tree_file):
        host = graph_to_graph6(tight_construction(3, 8))
        assert run(tmp_path, "embed", host, tree_file(spider(3)), "3") == EXIT_NOT_FOUND
        result = load(tmp_path, "embed.json")["result"]
        assert result["status"] == "HYPOTHESIS_FAILED"
        assert any("hypothesis failed" in note for note in result["notes"])

    def test_host_from_file(self, tmp_path, tree_file):
        host = tmp_path / "host.g6"
        host.write_text(graph_to_graph6(Graph.complete(4)) + "\n", encoding="utf-8")
        assert run(tmp_path, "embed", str(host), tree_file(Tree.path(4)), "3", "--method", "oracle") == EXIT_FOUND

    def test_malformed_inputs(self, tmp_path, tree_file):
        assert run(tmp_path, "embed", "!!!", tree_file(Tree.path(3)), "2") == EXIT_INPUT_ERROR
        assert run(tmp_path, "embed", "Bw", str(tmp_path / "missing.txt"), "2") == EXIT_INPUT_ERROR


class TestSweep:
    def test_small_sweep(self, tmp_path):
        assert run(tmp_path, "sweep", "--n-max", "3") == EXIT_FOUND
        report = load(tmp_path, "sweep_n3_all_all.json")
        assert report["sweep"]["violations"] == []
        assert report["sweep"]["totals"]["graphs"] == 1 + 2 + 8

    def test_seven_needs_flag(self, tmp_path):
        assert run(tmp_path, "sweep", "--n-max", "7") == EXIT_INPUT_ERROR

    def test_cap_flag(self, tmp_path, monkeypatch):
        # restored on teardown; the flag writes to os.environ
        monkeypatch.setenv("LKS_GRAPH_ENUM_CAP", "7")
        assert run(tmp_path, "--graph-enum-cap", "2", "sweep", "--n-max", "3") == EXIT_INPUT_ERROR


class TestRamsey:
    def test_pair(self, tmp_path, tree_file):
        t1, t2 = tree_file(Tree.path(2), "t1.txt"), tree_file(Tree.path(3), "t2.txt")
        assert run(tmp_path, "ramsey", "--t1", t1, "--t2", t2, "--chain") == EXIT_FOUND
        report = load(tmp_path, "ramsey_pair.json")
        assert report["r"] == 3 and report["within_bound"]
        assert report["chain"]["failures"] == []

    def test_lone_tree(self, tmp_path, tree_file):
        assert run(tmp_path, "ramsey", "--t1", tree_file(Tree.path(2))) == EXIT_INPUT_ERROR

    def test_star_table(self, tmp_path):
        assert run(tmp_path, "ramsey", "--stars", "--n-max", "4") == EXIT_FOUND
        rows = load(tmp_path, "ramsey_stars_4.json")["stars"]
        assert all(row["matches"] for row in rows)

    def test_sampled_reduction(self, tmp_path):
        assert run(tmp_path, "--seed", "3", "ramsey", "--reduction", "--n", "9", "--samples", "40") == EXIT_FOUND
        report = load(tmp_path, "ramsey_reduction_n9.json")["reduction"]
        assert report["colorings"] == 40 and report["checks"] == 40 * 8
        assert report["violations"] == []

    def test_exhaustive_reduction(self, tmp_path):
        assert run(tmp_path, "ramsey", "--reduction", "--n-max", "4") == EXIT_FOUND
        assert load(tmp_path, "ramsey_reduction_n4.json")["reduction"]["colorings"] == 64


class TestExtremal:
    def test_tight_construction(self, tmp_path, capsys):
        assert run(tmp_path, "extremal", "--k", "3", "--n", "8") == EXIT_FOUND
        assert graph_to_graph6(tight_construction(3, 8)) in capsys.readouterr().out
        assert load(tmp_path, "extremal_k3_n8_pad0.json")["consistent"]

    def test_even_k_rejected(self, tmp_path):
        assert run(tmp_path, "extremal", "--k", "4", "--n", "10") == EXIT_INPUT_ERROR
