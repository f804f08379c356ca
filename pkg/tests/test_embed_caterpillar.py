import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SAMPLE_SHAPE
from lks.embed_caterpillar import (
    RotationState,
    align_body,
    embed_caterpillar_even_c,
    embed_caterpillar_odd_c,
    embed_path_with_star,
    find_long_path,
    find_max_large_path,
    loaded_joints,
    find_path_of_length,
    odd_c_conditions,
    pivot_window,
    rotate_path,
    shape_is_covered,
    solve_caterpillar,
    zigzags,
)
from lks.errors import InvalidPivotError, PreconditionError
from lks.graph_core import Graph, HostPath, Tree, mask_of
from lks.oracle import hypothesis_holds, verify_embedding
from lks.partition import LksInstance, edge_minimal_reduce, lks_partition
from lks.results import EmbedStatus
from lks.sweep import planted_host
from lks.taxonomy import CaterpillarShape, caterpillar_layout, reconstruct


class TestPaths:
    def test_hamiltonian_path_in_complete_graph(self, rng):
        path = find_long_path(Graph.complete(7), 6, rng)
        assert path.length == 6 and path.is_valid_in(Graph.complete(7))

    def test_cycle(self, rng):
        path = find_long_path(Graph.cycle(5), 2, rng)
        assert path.length == 2 and path.is_valid_in(Graph.cycle(5))

    def test_too_long(self, rng):
        assert find_long_path(Graph.path(4), 4, rng) is None
        assert find_long_path(Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)]), 2, rng) is None

    def test_planted_host(self, rng):
        g = planted_host(20, 8, rng)
        assert hypothesis_holds(g, 8)
        host = edge_minimal_reduce(LksInstance(g, 8))
        L = lks_partition(LksInstance(host, 8)).L
        path = find_path_of_length(host, 8, L, rng)
        assert path is not None and path.length >= 7
        assert path.is_valid_in(g) and L >> path.end & 1

    def test_large_path_keeps_its_end_closed(self, rng):
        host = edge_minimal_reduce(LksInstance(planted_host(20, 8, rng), 8))
        L = lks_partition(LksInstance(host, 8)).L
        path = find_max_large_path(host, 8, L, rng)
        assert path is not None and path.is_valid_in(host)
        assert path.length >= 7 and L >> path.end & 1
        assert host.adj[path.end] & L & ~path.mask() == 0

    def test_large_path_prefers_large_vertices(self, rng):
        # S = {0, 1, 2} independent, L = {3, 4, 5, 6} a clique joined to S
        g = Graph.from_edges(7, [(u, v) for u in range(7) for v in range(u + 1, 7) if v >= 3])
        path = find_max_large_path(g, 3, mask_of([3, 4, 5, 6]), rng)
        assert set(path.vertices) >= {3, 4, 5, 6}


class TestAlignment:
    def test_path_inside_large_vertices(self):
        path = HostPath((0, 1, 2, 3, 4))
        shape = CaterpillarShape.of(1, 1, 2, 1, 0)
        assert align_body(path, shape, mask_of(range(5))) == (0, 1, 2, 3)

    def test_even_c_on_alternating_path(self):
        path = HostPath((0, 1, 2, 3, 4, 5))
        L = mask_of([1, 3, 5])
        assert zigzags(path, L)
        assert align_body(path, CaterpillarShape.of(1, 1, 2, 1, 1), L) == (0, 1, 2, 3, 4)

    def test_odd_c_parity_obstruction(self):
        path = HostPath((0, 1, 2, 3, 4, 5))
        assert align_body(path, CaterpillarShape.of(1, 1, 1, 1, 1), mask_of([1, 3, 5])) is None

    def test_body_longer_than_path(self):
        with pytest.raises(PreconditionError):
            align_body(HostPath((0, 1)), CaterpillarShape.of(1, 1, 1, 1, 1), 0)


class TestRotation:
    def _chorded_path(self) -> Graph:
        return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 4)])

    def test_rotation_around_a_chord(self):
        g = self._chorded_path()
        rotated = rotate_path(RotationState(g, HostPath((0, 1, 2, 3, 4)), 1, 1, 1))
        assert rotated.vertices == (0, 1, 4, 3, 2)
        assert rotated.is_valid_in(g)

    def test_last_pivot_is_identity(self):
        g = self._chorded_path()
        path = HostPath((0, 1, 2, 3, 4))
        assert rotate_path(RotationState(g, path, 0, 0, 3)) == path

    def test_pivot_must_be_a_chord(self):
        with pytest.raises(InvalidPivotError):
            rotate_path(RotationState(self._chorded_path(), HostPath((0, 1, 2, 3, 4)), 0, 0, 0))
        with pytest.raises(InvalidPivotError):
            rotate_path(RotationState(self._chorded_path(), HostPath((0, 1, 2, 3, 4)), 0, 0, 4))

    def test_pivot_window(self):
        assert pivot_window(10, 1, 2) == [(1, 8)]
        assert pivot_window(10, 1, 6) == [(1, 3), (6, 8)]
        assert pivot_window(2, 1, 2) == []


class TestConditions:
    def test_condition_one(self):
        assert odd_c_conditions(CaterpillarShape.of(1, 2, 1, 2, 1), 10) == "i"

    def test_condition_two(self):
        # max{a,e} above k/2
        assert odd_c_conditions(CaterpillarShape.of(5, 1, 1, 1, 1), 8) == "ii"

    def test_even_c_always_applies(self):
        assert shape_is_covered(SAMPLE_SHAPE, 100)
        assert shape_is_covered(CaterpillarShape.of(0, 3, 2, 0, 0), 1000)

    def test_short_odd_c(self):
        assert not shape_is_covered(CaterpillarShape.of(1, 2, 3, 1, 1), 20)

    def test_requires_ell_at_least_c(self):
        with pytest.raises(PreconditionError):
            shape_is_covered(CaterpillarShape.of(1, 0, 3, 1, 1), 8)


class TestEmbedders:
    def test_even_c_in_complete_graph(self, rng):
        shape = CaterpillarShape.of(1, 1, 2, 1, 1)
        t = reconstruct(shape)
        result = solve_caterpillar(Graph.complete(7), 6, t, shape, rng=rng)
        assert result.status == EmbedStatus.EMBEDDED
        assert verify_embedding(Graph.complete(7), t, dict(result.embedding))

    def test_odd_c_in_complete_graph(self, rng):
        shape = CaterpillarShape.of(1, 2, 1, 2, 1)
        t = reconstruct(shape)
        emb = embed_caterpillar_odd_c(Graph.complete(8), 7, t, caterpillar_layout(t, shape), rng)
        assert emb is not None and verify_embedding(Graph.complete(8), t, emb)

    def test_path_with_one_star(self, rng):
        shape = CaterpillarShape.of(2, 3, 0, 0, 1)
        t = reconstruct(shape)
        g = Graph.complete(7)
        emb = embed_path_with_star(g, 6, t, caterpillar_layout(t, shape), rng)
        assert emb is not None and verify_embedding(g, t, emb)

    def test_wrong_parity_is_rejected(self, rng):
        t = reconstruct(SAMPLE_SHAPE)
        with pytest.raises(PreconditionError):
            embed_caterpillar_odd_c(Graph.complete(13), 12, t, caterpillar_layout(t, SAMPLE_SHAPE), rng)
        odd = CaterpillarShape.of(1, 2, 1, 2, 1)
        t = reconstruct(odd)
        with pytest.raises(PreconditionError):
            embed_caterpillar_even_c(Graph.complete(8), 7, t, caterpillar_layout(t, odd), rng)

    def test_sample_in_planted_host(self, sample_caterpillar):
        rng = np.random.default_rng(7)
        g = planted_host(30, 12, rng)
        result = solve_caterpillar(g, 12, sample_caterpillar, SAMPLE_SHAPE, rng=rng)
        assert result.status == EmbedStatus.EMBEDDED
        assert verify_embedding(g, sample_caterpillar, dict(result.embedding))

    def test_trace_is_kept_on_request(self, rng):
        shape = CaterpillarShape.of(1, 2, 1, 2, 1)
        t = reconstruct(shape)
        result = solve_caterpillar(Graph.complete(8), 7, t, shape, rng=rng, keep_trace=True)
        assert result.found and "shape C(1,2,1,2,1)" in result.notes

    def test_uncovered_shape(self, rng):
        shape = CaterpillarShape.of(1, 2, 3, 1, 1)
        with pytest.raises(PreconditionError):
            solve_caterpillar(Graph.complete(40), 8, reconstruct(shape), shape, rng=rng)

    def test_hypothesis_failure_is_diagnosed(self, tight_3_8, rng):
        result = solve_caterpillar(tight_3_8, 3, Tree.path(4), rng=rng)
        assert result.status == EmbedStatus.HYPOTHESIS_FAILED

    def test_odd_c_with_empty_last_end(self, rng):
        shape = CaterpillarShape.of(1, 2, 1, 2, 0)
        t = reconstruct(shape)
        g = Graph.complete(7)
        emb = embed_caterpillar_odd_c(g, 6, t, caterpillar_layout(t, shape), rng)
        assert emb is not None and verify_embedding(g, t, emb)

    def test_odd_c_with_empty_first_end(self, rng):
        shape = CaterpillarShape.of(0, 2, 1, 2, 1)
        t = reconstruct(shape)
        g = Graph.complete(7)
        result = solve_caterpillar(g, 6, t, shape, rng=rng)
        assert result.status == EmbedStatus.EMBEDDED
        assert verify_embedding(g, t, dict(result.embedding))

    def test_odd_c_with_both_ends_empty(self, rng):
        for shape, n in ((CaterpillarShape.of(0, 2, 1, 2, 0), 6), (CaterpillarShape.of(0, 1, 1, 1, 0), 4)):
            t = reconstruct(shape)
            g = Graph.complete(n)
            emb = embed_caterpillar_odd_c(g, n - 1, t, caterpillar_layout(t, shape), rng)
            assert emb is not None and verify_embedding(g, t, emb)


def _check_rotation(n: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    g = planted_host(n, n // 2, rng)
    path = find_long_path(g, n // 2, rng)
    if path is None:
        return
    x, m = path.vertices, path.length
    for s in range(m):
        if g.has_edge(x[s], x[m]):
            rotated = rotate_path(RotationState(g, path, 0, 0, s))
            assert rotated.is_valid_in(g)
            assert sorted(rotated.vertices) == sorted(x)
            assert rotated.length == m


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=6, max_value=14), st.integers(min_value=0, max_value=2**31 - 1))
def test_rotation_keeps_vertices(n, seed):
    _check_rotation(n, seed)


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(st.integers(min_value=6, max_value=20), st.integers(min_value=0, max_value=2**31 - 1))
def test_rotation_keeps_vertices_at_scale(n, seed):
    _check_rotation(n, seed)


@st.composite
def _shapes(draw, max_body: int):
    a = draw(st.integers(0, max_body))
    c = draw(st.integers(0, max_body - a))
    e = draw(st.integers(0, max_body - a - c))
    return CaterpillarShape.of(a, draw(st.integers(0, 3)), c, draw(st.integers(0, 3)), e)


def _placements(path: HostPath, shape: CaterpillarShape, L: int):
    """Every window of the body along the path, both directions, ordered by its
    lower index and forwards first, that puts the loaded joints on L."""
    span, x = shape.body_length, path.vertices
    found = []
    for i in range(len(x)):
        for j in (i + span, i - span):
            if not 0 <= j < len(x):
                continue
            step = 1 if j >= i else -1
            hosts = tuple(x[i + step * p] for p in range(span + 1))
            if all(L >> hosts[p] & 1 for p in loaded_joints(shape)):
                found.append(((min(i, j), step < 0), hosts))
    return [hosts for _, hosts in sorted(found)]


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_align_body_finds_the_first_placement(data):
    order = data.draw(st.integers(min_value=1, max_value=10))
    path = HostPath(tuple(data.draw(st.permutations(range(order)))))
    L = data.draw(st.integers(min_value=0, max_value=2**order - 1))
    shape = data.draw(_shapes(path.length))
    placements = _placements(path, shape, L)
    hosts = align_body(path, shape, L)
    if not placements:
        assert hosts is None
    else:
        assert hosts == placements[0]


@st.composite
def _alternating(draw, min_length: int):
    length = draw(st.integers(min_value=min_length, max_value=min_length + 6))
    first = draw(st.booleans())
    path = HostPath(tuple(range(length + 1)))
    return path, mask_of(v for v in path.vertices if (v % 2 == 0) == first)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_parity_decides_alignment_on_alternating_paths(data):
    a, b, c, d, e = data.draw(st.tuples(
        st.integers(0, 3), st.integers(1, 3), st.integers(0, 4), st.integers(1, 3), st.integers(0, 3),
    ))
    shape = CaterpillarShape.of(a, b, c, d, e)
    path, L = data.draw(_alternating(shape.body_length + 1))
    assert zigzags(path, L)
    hosts = align_body(path, shape, L)
    if c % 2:
        assert hosts is None
    else:
        assert hosts is not None
        assert all(L >> hosts[p] & 1 for p in loaded_joints(shape))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_failed_adjacent_joints_leave_a_zigzag(data):
    # no two consecutive S-vertices, as on a path of an edge-minimal host
    a, b, d, e = data.draw(st.tuples(st.integers(0, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 3)))
    shape = CaterpillarShape.of(a, b, 1, d, e)
    length = data.draw(st.integers(min_value=shape.body_length, max_value=shape.body_length + 6))
    large = data.draw(st.lists(st.booleans(), min_size=length + 1, max_size=length + 1))
    for i in range(1, len(large)):
        if not large[i - 1]:
            large[i] = True
    path = HostPath(tuple(range(length + 1)))
    L = mask_of(v for v in path.vertices if large[v])
    if align_body(path, shape, L) is None:
        assert zigzags(path, L, a, e)
