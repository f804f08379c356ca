import pytest

from lks.errors import HypothesisNotMetError
from lks.graph_core import Graph, mask_of
from lks.oracle import hypothesis_holds
from lks.partition import (
    LksInstance,
    abcd_partition,
    chain_evidence,
    edge_minimal_reduce,
    fits,
    lks_partition,
)


class TestLksPartition:
    def test_complete_graph(self):
        p = lks_partition(LksInstance(Graph.complete(5), 4))
        assert p.large == set(range(5)) and p.S == 0

    def test_edgeless(self):
        p = lks_partition(LksInstance(Graph.empty(4), 1))
        assert p.L == 0 and p.small == set(range(4))

    def test_tight_construction(self, tight_3_8):
        inst = LksInstance(tight_3_8, 3)
        assert lks_partition(inst).large == {0, 4}
        assert inst.large == 2 and not inst.hypothesis


def test_fits():
    assert fits(3, 3) and not fits(4, 3)


class TestEdgeMinimalReduce:
    def test_k4(self):
        reduced = edge_minimal_reduce(LksInstance(Graph.complete(4), 2))
        assert sorted(reduced.edges()) == [(1, 2), (1, 3), (2, 3)]

    def test_result_is_minimal(self):
        g = Graph.complete(6)
        reduced = edge_minimal_reduce(LksInstance(g, 3))
        assert hypothesis_holds(reduced, 3)
        for u, v in reduced.edges():
            assert not hypothesis_holds(reduced.without_edge(u, v), 3)
        S = lks_partition(LksInstance(reduced, 3)).S
        assert all(not reduced.adj[v] & S for v in range(6) if S >> v & 1)

    def test_requires_hypothesis(self, tight_3_8):
        with pytest.raises(HypothesisNotMetError):
            edge_minimal_reduce(LksInstance(tight_3_8, 3))


class TestAbcd:
    def test_complete_graph(self):
        g = Graph.complete(5)
        parts = abcd_partition(g, 4, lks_partition(LksInstance(g, 4)))
        assert parts.A == 0 and parts.B == g.full
        assert parts.C == 0 and parts.D == 0

    def test_tight_construction(self, tight_3_8):
        parts = abcd_partition(tight_3_8, 3, lks_partition(LksInstance(tight_3_8, 3)))
        assert parts.A == mask_of([0, 4]) and parts.B == 0
        assert parts.C == 0 and parts.D == parts.S

    def test_c_vertices(self):
        # 0 and 1 have degree 5; 2..5 only see 0 and 1
        edges = [(0, 1)] + [(h, v) for h in (0, 1) for v in range(2, 6)]
        g = Graph.from_edges(6, edges)
        parts = abcd_partition(g, 4, lks_partition(LksInstance(g, 4)))
        assert parts.L == mask_of([0, 1])
        assert parts.C == mask_of([2, 3, 4, 5])
        assert parts.A == mask_of([0, 1]) and parts.B == 0
        assert parts.X == mask_of([0, 1])
        assert parts.to_json()["C"] == [2, 3, 4, 5]

    def test_chain_evidence_keys(self, tight_3_8):
        parts = abcd_partition(tight_3_8, 3, lks_partition(LksInstance(tight_3_8, 3)))
        evidence = chain_evidence(tight_3_8, 3, parts)
        assert set(evidence) == {
            "b_independent", "n_light_into_b", "n_at_least_twice_b", "no_x_c_edges",
            "x_equals_b", "no_b_c_edges", "d_nonempty",
        }
        assert evidence["b_independent"] and evidence["d_nonempty"]
