"""
二つの星をもつキャタピラーの構成的埋め込み。
Constructive embedder for caterpillars C(a,b,c,d,e): a long host path is found, the
body is shifted along it until the loaded joints sit on vertices of degree >= k,
and for odd c the path is first rotated around a chord from its last vertex so
that it carries an L-L edge where the shifting needs one.

Every routine works with k_t = |E(t)|, the edge count of the guest, after reducing
the host edge-minimally for that threshold (S is then independent).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .config import get_settings
from .errors import InvalidPivotError, PreconditionError
from .graph_core import Embedding, Graph, HostPath, Tree, iter_bits, lowest, popcount
from .oracle import diagnose_failure, hypothesis_holds
from .partition import LksInstance, edge_minimal_reduce, lks_partition
from .results import EmbedResult, EmbedStatus, RotationTrace
from .embed_diam5 import greedy_leaf_completion
from .taxonomy import CaterpillarLayout, CaterpillarShape, caterpillar_layout

logger = logging.getLogger(__name__)


# --- 長い道の探索 / Long paths ---

def _reachable(g: Graph, start: int, allowed: int) -> int:
    seen = frontier = 1 << start
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def _exact_path(g: Graph, length: int, starts: Optional[int] = None) -> Optional[List[int]]:
    """Depth-first search for a simple path with exactly ``length`` edges starting in ``starts``."""
    if length + 1 > g.n:
        return None
    path: List[int] = []

    def extend(used: int) -> bool:
        if len(path) == length + 1:
            return True
        need = length + 1 - len(path)
        last = path[-1]
        if popcount(_reachable(g, last, ~used)) - 1 < need:
            return False
        for u in iter_bits(g.adj[last] & ~used):
            path.append(u)
            if extend(used | 1 << u):
                return True
            path.pop()
        return False

    for start in iter_bits(g.full if starts is None else starts):
        if length and not g.adj[start]:
            continue
        path[:] = [start]
        if extend(1 << start):
            return list(path)
    return None


def _rotation_extension(g: Graph, length: int, rng: np.random.Generator, restarts: int) -> Optional[List[int]]:
    """Pósa-style rotation-extension with random restarts."""
    active = [v for v in range(g.n) if g.adj[v]]
    if not active:
        return None
    for _ in range(restarts):
        path = [active[int(rng.integers(len(active)))]]
        position = {path[0]: 0}
        used = 1 << path[0]
        stalls = 0
        while len(path) <= length and stalls < 4 * g.n:
            free = list(iter_bits(g.adj[path[-1]] & ~used))
            if not free and g.adj[path[0]] & ~used:
                path.reverse()
                position = {v: i for i, v in enumerate(path)}
                continue
            if free:
                nxt = free[int(rng.integers(len(free)))]
                position[nxt] = len(path)
                path.append(nxt)
                used |= 1 << nxt
                continue
            chords = [position[u] for u in iter_bits(g.adj[path[-1]] & used) if position[u] < len(path) - 2]
            if not chords:
                break
            i = chords[int(rng.integers(len(chords)))]
            path[i + 1:] = path[:i:-1]
            for j in range(i + 1, len(path)):
                position[path[j]] = j
            stalls += 1
        if len(path) > length:
            return path[: length + 1]
    return None


def find_long_path(g: Graph, length: int, rng: Optional[np.random.Generator] = None) -> Optional[HostPath]:
    """A path with exactly ``length`` edges, or None.

    Rotation-extension runs first; hosts within the exact-search cap fall back to
    exhaustive search, so for them None means no such path exists.
    """
    if g.n == 0 or length + 1 > g.n:
        return None
    if length == 0:
        return HostPath((0,))
    settings = get_settings()
    rng = rng if rng is not None else np.random.default_rng(0)
    found = _rotation_extension(g, length, rng, settings.heuristic_restarts)
    if found is None and g.n <= settings.exact_path_cap:
        found = _exact_path(g, length)
    return None if found is None else HostPath(tuple(found))


def _ending_in(path: HostPath, L: int) -> Optional[HostPath]:
    if L >> path.end & 1:
        return path
    if L >> path.vertices[0] & 1:
        return path.reversed()
    if path.length and L >> path.vertices[-2] & 1:
        return HostPath(path.vertices[:-1])
    return None


def find_path_of_length(
    g: Graph, k: int, L: int, rng: Optional[np.random.Generator] = None
) -> Optional[HostPath]:
    """A path of length >= k-1 that ends in L (a bitset), or None.

    A path of length k is trimmed or reversed so that it ends in L, which always
    works when S is independent.
    """
    if k <= 0:
        return HostPath((lowest(L),)) if L else None
    path = find_long_path(g, k, rng)
    if path is not None:
        ended = _ending_in(path, L)
        if ended is not None:
            return ended
    if g.n <= get_settings().exact_path_cap:
        found = _exact_path(g, k - 1, L)
        if found is not None:
            return HostPath(tuple(reversed(found)))
    return None


# --- 胴体の位置合わせ / Body alignment ---

def loaded_joints(shape: CaterpillarShape) -> Tuple[int, ...]:
    """Body positions of the joints that carry at least one star leaf."""
    first, second = shape.joints
    return tuple(p for p, load in ((first, shape.b), (second, shape.d)) if load > 0)


def align_body(path: HostPath, shape: CaterpillarShape, L: int) -> Optional[Tuple[int, ...]]:
    """Host vertex for every body position, or None.

    Tries offsets 0..length(path)-(a+c+e) in increasing order, the body forwards
    then backwards at each offset, and accepts the first placement that puts every
    loaded joint on L.
    """
    span = shape.body_length
    if path.length < span:
        raise PreconditionError(f"path of length {path.length} is shorter than the body ({span})")
    loaded = loaded_joints(shape)
    for offset in range(path.length - span + 1):
        window = path.vertices[offset: offset + span + 1]
        for hosts in (window, window[::-1]):
            if all(L >> hosts[p] & 1 for p in loaded):
                return hosts
    return None


def zigzags(path: HostPath, L: int, skip_front: int = 0, skip_back: int = 0) -> bool:
    """True iff the path alternates between L and S outside its first and last edges given."""
    inner = path.vertices[skip_front: len(path.vertices) - skip_back]
    marks = [bool(L >> v & 1) for v in inner]
    return all(a != b for a, b in zip(marks, marks[1:]))


# --- 道の回転 / Path rotation ---

def pivot_window(m: int, ae: int, AE: int) -> List[Tuple[int, int]]:
    """Index ranges for the pivot s; split in two when max{a,e} exceeds m/2."""
    if 2 * AE > m:
        ranges = [(ae, m - AE - 1), (AE, m - ae - 1)]
    else:
        ranges = [(ae, m - ae - 1)]
    return [(lo, hi) for lo, hi in ranges if lo <= hi]


@dataclass(frozen=True)
class RotationState:
    """Path Q = x_0..x_m ending in L, the end offsets ae/AE of the body, and a pivot s."""

    g: Graph
    Q: HostPath
    ae: int
    AE: int
    s: int

    @property
    def m(self) -> int:
        return self.Q.length

    def window(self) -> List[Tuple[int, int]]:
        return pivot_window(self.m, self.ae, self.AE)


def rotate_path(state: RotationState) -> HostPath:
    """x_0..x_s followed by x_m, x_{m-1}, ..., x_{s+1}; same vertices, same length."""
    x, m, s = state.Q.vertices, state.m, state.s
    if not 0 <= s < m:
        raise InvalidPivotError(f"pivot {s} outside 0..{m - 1}")
    if not state.g.has_edge(x[s], x[m]):
        raise InvalidPivotError(f"x_{s}={x[s]} is not adjacent to the path end x_{m}={x[m]}")
    return HostPath(x[: s + 1] + x[:s:-1])


def _absorb_large_neighbours(g: Graph, path: HostPath, L: int) -> HostPath:
    """Extends the path end by L-neighbours off the path until N(x_m) ∩ L ⊆ V(Q)."""
    vertices = list(path.vertices)
    on_path = path.mask()
    while True:
        nxt = lowest(g.adj[vertices[-1]] & L & ~on_path)
        if nxt is None:
            return HostPath(tuple(vertices))
        vertices.append(nxt)
        on_path |= 1 << nxt


def _pivot_candidates(g: Graph, path: HostPath, shape: CaterpillarShape, L: int) -> Tuple[List[int], List[Tuple[int, int]]]:
    x, m = path.vertices, path.length
    chords = [s for s in range(m - 1) if L >> x[s] & 1 and g.has_edge(x[s], x[m])]
    window = pivot_window(m, shape.ae, shape.AE)
    inside = [s for s in chords if any(lo <= s <= hi for lo, hi in window)]
    return inside + [s for s in chords if s not in inside], window


# --- 条件 / Applicability ---

def odd_c_conditions(shape: CaterpillarShape, n: int) -> Optional[str]:
    """Which of the two odd-c conditions holds for host order n ("i", "ii" or None)."""
    k = shape.k
    if 2 * shape.AE <= k:
        return "i" if k >= n // 2 + 2 * shape.ae else None
    return "ii" if k >= n // 4 + shape.a + shape.e + 1 else None


def shape_is_covered(shape: CaterpillarShape, n: int) -> bool:
    """c even, or l + c >= floor(n/2); in the latter case an odd-c condition holds."""
    if shape.ell < shape.c:
        raise PreconditionError(f"{shape} has l={shape.ell} < c={shape.c}")
    if shape.c % 2 == 0:
        return True
    if shape.ell + shape.c < n // 2:
        return False
    assert odd_c_conditions(shape, n) is not None, f"{shape} meets l + c >= n/2 but neither odd-c condition"
    return True


# --- 埋め込み / Embedding ---

@dataclass
class _Prepared:
    host: Graph
    kt: int
    L: int


def _prepare(g: Graph, k: int, t: Tree) -> _Prepared:
    kt = t.size
    if kt > k:
        raise PreconditionError(f"tree has {kt} edges, more than k={k}")
    inst = LksInstance(g, kt)
    host = edge_minimal_reduce(inst) if inst.hypothesis else g
    return _Prepared(host, kt, lks_partition(LksInstance(host, kt)).L)


def _complete(g: Graph, t: Tree, layout: CaterpillarLayout, hosts: Tuple[int, ...]) -> Embedding:
    emb = Embedding(t, g, dict(zip(layout.body, hosts)))
    return greedy_leaf_completion(emb, layout.first_star + layout.second_star)


def embed_path_with_star(
    g: Graph, k: int, t: Tree, layout: Optional[CaterpillarLayout] = None,
    rng: Optional[np.random.Generator] = None,
) -> Optional[Embedding]:
    """Caterpillars with at most one loaded joint (b = 0 or d = 0): a path of length
    k_t and at most one shift put that joint on L."""
    layout = layout or caterpillar_layout(t)
    shape = layout.shape
    if shape.b and shape.d:
        raise PreconditionError(f"{shape} has two loaded joints")
    prep = _prepare(g, k, t)
    path = find_long_path(prep.host, prep.kt, rng)
    if path is None:
        return None
    hosts = align_body(path, shape, prep.L)
    if hosts is None:
        return None
    return _complete(g, t, layout, hosts)


def embed_caterpillar_even_c(
    g: Graph, k: int, t: Tree, layout: Optional[CaterpillarLayout] = None,
    rng: Optional[np.random.Generator] = None,
) -> Optional[Embedding]:
    """
    c が偶数の場合: 長さ k の道に沿って胴体をずらす。
    Even c with l >= c: the body is shifted along a path of length k_t, at most c times.
    """
    layout = layout or caterpillar_layout(t)
    shape = layout.shape
    if shape.c % 2:
        raise PreconditionError(f"{shape} has odd c")
    if shape.ell < shape.c:
        raise PreconditionError(f"{shape} has l < c")
    if shape.b == 0 or shape.d == 0:
        return embed_path_with_star(g, k, t, layout, rng)
    prep = _prepare(g, k, t)
    path = find_long_path(prep.host, prep.kt, rng)
    if path is None:
        logger.debug("no path of length %d in the reduced host", prep.kt)
        return None
    hosts = align_body(path, shape, prep.L)
    if hosts is None:
        logger.debug("no shift of %s fits on %s (zigzag: %s)", shape, path.vertices,
                     zigzags(path, prep.L, shape.a, shape.e))
        return None
    return _complete(g, t, layout, hosts)


def _inner_reading(shape: CaterpillarShape) -> CaterpillarShape:
    """Reads one star leaf at each empty body end as the new end vertex, so a and e
    become positive while c stays the same."""
    a, b, c, d, e = shape.as_tuple()
    if a == 0:
        a, b = 1, b - 1
    if e == 0:
        d, e = d - 1, 1
    return CaterpillarShape.of(a, b, c, d, e)


def embed_caterpillar_odd_c(
    g: Graph, k: int, t: Tree, layout: Optional[CaterpillarLayout] = None,
    rng: Optional[np.random.Generator] = None, trace: Optional[List[RotationTrace]] = None,
) -> Optional[Embedding]:
    """
    c が奇数の場合: L に終わる長い道を選び、必要なら端点からの弦で回転してから位置合わせする。
    Odd c: take a path Q of length >= k_t - 1 ending in L with N(x_m) ∩ L ⊆ V(Q),
    align the body on it, and otherwise rotate Q around a chord x_s x_m with s in
    the pivot window and align on the rotated path.

    A shape with an empty body end is read again with a star leaf as that end;
    when this empties a star the single-star procedure takes over.
    """
    layout = layout or caterpillar_layout(t)
    shape = layout.shape
    if shape.c % 2 == 0:
        raise PreconditionError(f"{shape} has even c")
    if shape.ell < shape.c:
        raise PreconditionError(f"{shape} has l < c")
    if shape.b == 0 or shape.d == 0:
        return embed_path_with_star(g, k, t, layout, rng)
    if odd_c_conditions(shape, g.n) is None:
        raise PreconditionError(f"{shape} meets neither odd-c condition for n={g.n}")
    if shape.a == 0 or shape.e == 0:
        inner = caterpillar_layout(t, _inner_reading(shape))
        logger.debug("reading %s as %s", shape, inner.shape)
        if inner.shape.b == 0 or inner.shape.d == 0:
            return embed_path_with_star(g, k, t, inner, rng)
        layout = inner
    return _rotate_and_align(g, k, t, layout, rng, trace if trace is not None else [])


def find_max_large_path(
    g: Graph, k: int, L: int, rng: Optional[np.random.Generator] = None, samples: Optional[int] = None,
) -> Optional[HostPath]:
    """A path of length >= k-1 ending in L with N(x_m) ∩ L ⊆ V(Q), carrying as many
    L-vertices as the sampled candidates allow.

    Candidates come from independent rotation-extension runs; the exact path search
    supplies one when sampling finds none.
    """
    settings = get_settings()
    rng = rng if rng is not None else np.random.default_rng(0)
    samples = samples if samples is not None else settings.heuristic_restarts
    best: Optional[HostPath] = None
    best_score = -1
    if k + 1 <= g.n:
        for _ in range(samples):
            found = _rotation_extension(g, k, rng, 1)
            path = None if found is None else _ending_in(HostPath(tuple(found)), L)
            if path is None:
                continue
            path = _absorb_large_neighbours(g, path, L)
            score = popcount(path.mask() & L)
            if score > best_score:
                best, best_score = path, score
    if best is None:
        fallback = find_path_of_length(g, k, L, rng)
        if fallback is not None:
            best = _absorb_large_neighbours(g, fallback, L)
    return best


def _rotate_and_align(
    g: Graph, k: int, t: Tree, layout: CaterpillarLayout,
    rng: Optional[np.random.Generator], trace: List[RotationTrace],
) -> Optional[Embedding]:
    shape = layout.shape
    prep = _prepare(g, k, t)
    base = find_long_path(prep.host, prep.kt, rng)
    if base is not None:
        hosts = align_body(base, shape, prep.L)
        if hosts is not None:
            return _complete(g, t, layout, hosts)
    path = find_max_large_path(prep.host, prep.kt, prep.L, rng)
    max_rotations = get_settings().max_rotations
    rounds = 0
    while path is not None and path.length >= max(prep.kt - 1, shape.body_length) and rounds < max_rotations:
        path = _absorb_large_neighbours(prep.host, path, prep.L)
        hosts = align_body(path, shape, prep.L)
        if hosts is not None:
            trace.append(RotationTrace(path=list(path.vertices), aligned=True))
            return _complete(g, t, layout, hosts)
        pivots, window = _pivot_candidates(prep.host, path, shape, prep.L)
        if not any(lo <= s <= hi for s in pivots for lo, hi in window):
            logger.warning("empty pivot window %s on a path of length %d for %s", window, path.length, shape)
        if not pivots:
            trace.append(RotationTrace(path=list(path.vertices), window=window))
            break
        rounds += 1
        if rounds > 1:
            logger.warning("rotation round %d needed for %s", rounds, shape)
        for s in pivots:
            rotated = rotate_path(RotationState(prep.host, path, shape.ae, shape.AE, s))
            hosts = align_body(rotated, shape, prep.L)
            trace.append(RotationTrace(path=list(rotated.vertices), pivot=s, window=window, aligned=hosts is not None))
            if hosts is not None:
                return _complete(g, t, layout, hosts)
        path = _ending_in(rotate_path(RotationState(prep.host, path, shape.ae, shape.AE, pivots[0])), prep.L)
    return None




def solve_caterpillar(
    g: Graph, k: int, t: Tree, shape: Optional[CaterpillarShape] = None,
    rng: Optional[np.random.Generator] = None, keep_trace: bool = False,
) -> EmbedResult:
    """Routes a caterpillar to the single-star, even-c or odd-c procedure and wraps
    the outcome; failures are classified with the oracle."""
    layout = caterpillar_layout(t, shape)
    shape = layout.shape
    if not shape_is_covered(shape, g.n):
        raise PreconditionError(f"{shape} is outside the covered caterpillars for n={g.n}")
    trace: List[RotationTrace] = []
    if shape.b == 0 or shape.d == 0:
        emb = embed_path_with_star(g, k, t, layout, rng)
    elif shape.c % 2 == 0:
        emb = embed_caterpillar_even_c(g, k, t, layout, rng)
    else:
        emb = embed_caterpillar_odd_c(g, k, t, layout, rng, trace)
    notes = [f"shape {shape}"]
    if emb is not None:
        return EmbedResult(
            status=EmbedStatus.EMBEDDED, method="caterpillar", k=k, hypothesis=hypothesis_holds(g, k),
            embedding=emb.pairs(), notes=notes, rotations=trace if keep_trace else [],
        )
    result = diagnose_failure(g, k, t, "caterpillar", notes=notes)
    if keep_trace:
        result.rotations = trace
    return result
