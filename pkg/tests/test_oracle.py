from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_tree
from lks.graph_core import Embedding, Graph, Tree, labeled_graph, vertex_pairs
from lks.oracle import brute_embed, diagnose_failure, hypothesis_holds, oracle_result, verify_embedding
from lks.results import EmbedStatus


def test_edge_into_any_graph_with_an_edge():
    emb = brute_embed(Graph.from_edges(4, [(2, 3)]), Tree.path(2))
    assert emb is not None and sorted(emb.assignment.values()) == [2, 3]


def test_spider_misses_the_star(spider3):
    assert brute_embed(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]), spider3) is None


def test_path_into_cycle():
    emb = brute_embed(Graph.cycle(4), Tree.path(4))
    assert emb is not None and verify_embedding(Graph.cycle(4), Tree.path(4), emb)


def test_tree_larger_than_host():
    assert brute_embed(Graph.complete(3), Tree.path(4)) is None


class TestVerify:
    def test_identity(self, sample_caterpillar):
        host = sample_caterpillar.as_graph()
        assert verify_embedding(host, sample_caterpillar, {v: v for v in range(sample_caterpillar.order)})

    def test_non_injective(self):
        assert not verify_embedding(Graph.complete(3), Tree.path(3), {0: 0, 1: 1, 2: 0})

    def test_partial_and_non_edges(self):
        assert not verify_embedding(Graph.complete(3), Tree.path(3), {0: 0, 1: 1})
        assert not verify_embedding(Graph.path(3), Tree.path(3), {0: 0, 1: 2, 2: 1})

    def test_accepts_embedding_objects(self):
        emb = Embedding(Tree.path(2), Graph.complete(2), {0: 1, 1: 0})
        assert verify_embedding(Graph.complete(2), Tree.path(2), emb)


class TestHypothesis:
    def test_complete(self):
        assert hypothesis_holds(Graph.complete(6), 5)

    def test_tight(self, tight_3_8):
        assert not hypothesis_holds(tight_3_8, 3)

    def test_edgeless_threshold_zero(self):
        assert hypothesis_holds(Graph.empty(5), 0)

    def test_exact_half(self):
        # two of four vertices have degree 2
        g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3)])
        assert hypothesis_holds(g, 2)
        assert not hypothesis_holds(g.with_isolated(1), 2)


class TestDiagnostics:
    def test_hypothesis_failed(self, tight_3_8, spider3):
        result = diagnose_failure(tight_3_8, 3, spider3, "diam5")
        assert result.status == EmbedStatus.HYPOTHESIS_FAILED
        assert any("hypothesis failed" in note for note in result.notes)

    def test_gap_when_brute_force_succeeds(self):
        result = diagnose_failure(Graph.complete(4), 3, Tree.path(4), "caterpillar")
        assert result.status == EmbedStatus.CONJECTURE_GAP
        assert verify_embedding(Graph.complete(4), Tree.path(4), dict(result.embedding))

    def test_embeds_without_hypothesis(self):
        result = diagnose_failure(Graph.path(5), 3, Tree.path(4), "caterpillar")
        assert result.status == EmbedStatus.EMBEDDED and result.method == "oracle"

    def test_oracle_result_statuses(self, tight_3_8, spider3):
        assert oracle_result(Graph.complete(4), 3, Tree.path(4)).found
        assert oracle_result(Graph.complete(3), 1, Tree.path(4)).status == EmbedStatus.NOT_EMBEDDABLE
        assert oracle_result(tight_3_8, 3, spider3).status == EmbedStatus.HYPOTHESIS_FAILED


def _exists_by_permutation(g: Graph, t: Tree) -> bool:
    for image in permutations(range(g.n), t.order):
        if all(g.has_edge(image[u], image[v]) for u, v in t.edges):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_backtracking_agrees_with_permutations(data):
    n = data.draw(st.integers(min_value=1, max_value=5))
    mask = data.draw(st.integers(min_value=0, max_value=(1 << len(vertex_pairs(n))) - 1))
    g = labeled_graph(n, mask)
    order = data.draw(st.integers(min_value=1, max_value=5))
    parents = [data.draw(st.integers(min_value=0, max_value=i)) for i in range(order - 1)]
    t = random_tree(order, parents)
    emb = brute_embed(g, t)
    assert (emb is not None) == _exists_by_permutation(g, t)
    if emb is not None:
        assert verify_embedding(g, t, emb)


@pytest.mark.parametrize("size", [2, 3, 4])
def test_subtrees_embed_when_the_tree_does(size):
    g = Graph.cycle(6)
    assert brute_embed(g, Tree.path(size + 1)) is not None
    assert brute_embed(g, Tree.path(size)) is not None
