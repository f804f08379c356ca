"""
直径5以下の木の構成的埋め込み。
Constructive embedder for trees of diameter at most 5 into hosts in which at least
half of the vertices have degree >= k.

The host is first reduced edge-minimally (S becomes independent). The guest is
split around a centre edge r1r2 and six configurations are tried in a fixed order.
Each maps a small skeleton (r1, r2 and some of V1, V2, W1, W2) so that every
guest vertex left over is a leaf whose parent sits on an L-vertex; those leaves
are then placed greedily, which cannot run out of room because an L-vertex has at
least k >= |E(T)| neighbours.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .errors import CapacityError, HypothesisNotMetError, PreconditionError
from .formats import vertex_list
from .graph_core import Embedding, Graph, Tree, iter_bits, lowest, popcount
from .oracle import diagnose_failure, hypothesis_holds
from .partition import (
    AbcdPartition,
    LksInstance,
    abcd_partition,
    chain_evidence,
    edge_minimal_reduce,
    fits,
    lks_partition,
)
from .results import CascadeFailure, EmbedResult, EmbedStatus, StrategyTrace
from .taxonomy import CenterDecomposition, center_edge, level_sets

logger = logging.getLogger(__name__)


@dataclass
class StrategyState:
    """Working data shared by the configurations."""

    g: Graph
    k: int
    decomposition: CenterDecomposition
    partition: AbcdPartition

    @property
    def tree(self) -> Tree:
        return self.decomposition.tree

    def fresh(self) -> Embedding:
        return Embedding(self.tree, self.g)

    def in_class(self, emb: Embedding, guests: Sequence[int], mask: int) -> List[int]:
        return [x for x in guests if mask >> emb.image(x) & 1]


# --- 葉の貪欲補完 / Greedy leaf completion ---

def greedy_leaf_completion(emb: Embedding, pending: Sequence[int]) -> Embedding:
    """Maps each pending leaf to the smallest free host neighbour of its parent's image.

    Parents are processed in increasing order. Raises CapacityError when a parent
    image has no free neighbour left.
    """
    tree = emb.tree
    by_parent: Dict[int, List[int]] = {}
    for v in sorted(pending):
        if emb.image(v) is not None:
            raise PreconditionError(f"pending vertex {v} is already mapped")
        nbrs = tree.neighbors(v)
        if len(nbrs) != 1 or emb.image(nbrs[0]) is None:
            raise PreconditionError(f"pending vertex {v} is not a leaf under a mapped parent")
        by_parent.setdefault(nbrs[0], []).append(v)
    for parent in sorted(by_parent):
        host = emb.image(parent)
        for leaf in by_parent[parent]:
            target = lowest(emb.graph.adj[host] & ~emb.used)
            if target is None:
                raise CapacityError(f"host vertex {host} has no free neighbour for leaf {leaf}")
            emb.assign(leaf, target)
    return emb


def _place(emb: Embedding, guests: Sequence[int], candidates: int) -> bool:
    """Assigns guests to the smallest free vertices of ``candidates``."""
    free = candidates & ~emb.used
    if not fits(len(guests), popcount(free)):
        return False
    for guest, host in zip(guests, iter_bits(free)):
        emb.assign(guest, host)
    return True


def _place_children(state: StrategyState, emb: Embedding, parents: Sequence[int], targets: int) -> bool:
    for x in sorted(parents):
        if not _place(emb, state.decomposition.children(x), state.g.adj[emb.image(x)] & targets):
            return False
    return True


def _finish(state: StrategyState, emb: Embedding) -> Optional[Embedding]:
    L = state.partition.L
    pending = emb.unassigned()
    for v in pending:
        nbrs = state.tree.neighbors(v)
        if len(nbrs) != 1:
            return None
        parent_image = emb.image(nbrs[0])
        if parent_image is None or not L >> parent_image & 1:
            return None
    return greedy_leaf_completion(emb, pending)


def _split_trace(
    state: StrategyState, name: str, attempts: int, side: FrozenSet[int], on_c: Sequence[int], index: str
) -> StrategyTrace:
    """Successful trace recording how ``side`` was divided between C and L, and the
    children that had to follow the C part onto L."""
    children = [w for x in on_c for w in state.decomposition.children(x)]
    split = {
        f"V{index}C": vertex_list(on_c),
        f"V{index}L": vertex_list(side - frozenset(on_c)),
        f"W{index}C": vertex_list(children),
    }
    logger.debug("%s split %s", name, split)
    return StrategyTrace(name=name, guard=True, candidates=attempts, succeeded=True, split=split)


# --- 構成 / Configurations ---

Attempt = Tuple[Optional[Embedding], StrategyTrace]


def _b_b_edge(state: StrategyState) -> Attempt:
    """r1r2 onto an edge inside B; V1' and V2 onto L-neighbours of the two ends."""
    g, dec, parts = state.g, state.decomposition, state.partition
    pairs = [(u, v) for u in iter_bits(parts.B) for v in iter_bits(g.adj[u] & parts.B)]
    V1p, V2 = sorted(dec.V1p), sorted(dec.V2)
    for u, v in pairs:
        emb = state.fresh()
        emb.assign(dec.r1, u)
        emb.assign(dec.r2, v)
        if not _place(emb, V1p, g.adj[u] & parts.L):
            continue
        if not _place(emb, V2, g.adj[v] & parts.L):
            continue
        done = _finish(state, emb)
        if done is not None:
            return done, StrategyTrace(name="b_b_edge", guard=True, candidates=len(pairs), succeeded=True)
    return None, StrategyTrace(name="b_b_edge", guard=bool(pairs), candidates=len(pairs))


def _heavy_n_vertex(state: StrategyState) -> Attempt:
    """A vertex of N with at least k/4 neighbours in B takes the centre whose V' side
    is below k/4; that side and the other centre go into B."""
    g, k, parts = state.g, state.k, state.partition
    heavy = [v for v in iter_bits(parts.N) if 4 * g.degree_into(v, parts.B) >= k]
    sides = [d for d in (state.decomposition, state.decomposition.swapped()) if 4 * len(d.V1p) < k]
    attempts = 0
    for v in heavy:
        for dec in sides:
            attempts += 1
            emb = state.fresh()
            emb.assign(dec.r1, v)
            if not _place(emb, [dec.r2] + sorted(dec.V1p), g.adj[v] & parts.B):
                continue
            u = emb.image(dec.r2)
            if not _place(emb, sorted(dec.V2p), g.adj[u] & parts.L):
                continue
            done = _finish(state, emb)
            if done is not None:
                return done, StrategyTrace(name="heavy_n_vertex", guard=True, candidates=attempts, succeeded=True)
    return None, StrategyTrace(name="heavy_n_vertex", guard=bool(heavy and sides), candidates=attempts)


def _x_c_edge(state: StrategyState) -> Attempt:
    """r1 onto X, r2 onto an adjacent C-vertex; V1' split between C and L."""
    g, dec, parts = state.g, state.decomposition, state.partition
    pairs = [(u, v) for u in iter_bits(parts.X) for v in iter_bits(g.adj[u] & parts.C)]
    V1p, V2 = sorted(dec.V1p), sorted(dec.V2)
    for u, v in pairs:
        emb = state.fresh()
        emb.assign(dec.r1, u)
        emb.assign(dec.r2, v)
        if not _place(emb, V1p, g.adj[u] & (parts.C | parts.L)):
            continue
        V1C = state.in_class(emb, V1p, parts.C)
        if not _place_children(state, emb, V1C, parts.L):
            continue
        if not _place(emb, V2, g.adj[v] & parts.L):
            continue
        done = _finish(state, emb)
        if done is not None:
            return done, _split_trace(state, "x_c_edge", len(pairs), dec.V1p, V1C, "1")
    return None, StrategyTrace(name="x_c_edge", guard=bool(pairs), candidates=len(pairs))


def _heavy_vertices(state: StrategyState) -> List[int]:
    parts = state.partition
    return [w for w in iter_bits(parts.N) if 4 * state.g.degree_into(w, parts.C | parts.L) >= state.k]


def _heavy_cl_vertex(state: StrategyState) -> Attempt:
    """r1 onto a vertex w of N with deg_{C∪L}(w) >= k/4, r2 onto a B-neighbour of w;
    needs |V1'| < k/4."""
    g, dec, parts = state.g, state.decomposition, state.partition
    heavy = _heavy_vertices(state)
    small_side = 4 * len(dec.V1p) < state.k
    V1p, V2 = sorted(dec.V1p), sorted(dec.V2)
    attempts = 0
    if small_side:
        for w in heavy:
            for u in iter_bits(g.adj[w] & parts.B):
                attempts += 1
                emb = state.fresh()
                emb.assign(dec.r1, w)
                emb.assign(dec.r2, u)
                if not _place(emb, V1p, g.adj[w] & (parts.C | parts.L)):
                    continue
                V1C = state.in_class(emb, V1p, parts.C)
                if not _place(emb, V2, g.adj[u] & parts.L):
                    continue
                if not _place_children(state, emb, V1C, parts.L):
                    continue
                done = _finish(state, emb)
                if done is not None:
                    return done, _split_trace(state, "heavy_cl_vertex", attempts, dec.V1p, V1C, "1")
    return None, StrategyTrace(name="heavy_cl_vertex", guard=bool(heavy) and small_side, candidates=attempts)


def _split_v2(state: StrategyState, emb: Embedding, w: int) -> Optional[List[int]]:
    """Maps V2 into N(w) ∩ (C ∪ L), putting as many childless V2-vertices on C as
    possible and V2' on L first. Returns V2C, or None when there is no room."""
    g, dec, parts = state.g, state.decomposition, state.partition
    c_slots = list(iter_bits(g.adj[w] & parts.C & ~emb.used))
    l_slots = list(iter_bits(g.adj[w] & parts.L & ~emb.used))
    if not fits(len(dec.V2), len(c_slots) + len(l_slots)):
        return None
    childless = sorted(dec.V2 - dec.V2p)
    parents = sorted(dec.V2p)
    on_c = min(len(childless), len(c_slots))
    V2C = childless[:on_c]
    for guest, host in zip(childless[:on_c], c_slots):
        emb.assign(guest, host)
    c_slots = c_slots[on_c:]
    rest = childless[on_c:]
    for guest, host in zip(rest, l_slots):
        emb.assign(guest, host)
    l_slots = l_slots[len(rest):]
    for guest, host in zip(parents, l_slots + c_slots):
        emb.assign(guest, host)
        if parts.C >> host & 1:
            V2C.append(guest)
    return V2C


def _small_v1p_w2(state: StrategyState) -> Attempt:
    """Needs |V1' ∪ W2| < k/2: r2 onto a heavy w, r1 onto a B-neighbour u of w,
    V2 split between C and L around w, W2C behind the C part, V1' onto N(u) ∩ L."""
    g, dec, parts = state.g, state.decomposition, state.partition
    heavy = _heavy_vertices(state)
    small_side = 2 * (len(dec.V1p) + len(dec.W2)) < state.k
    V1p = sorted(dec.V1p)
    attempts = 0
    if small_side:
        for w in heavy:
            for u in iter_bits(g.adj[w] & parts.B):
                attempts += 1
                emb = state.fresh()
                emb.assign(dec.r2, w)
                emb.assign(dec.r1, u)
                V2C = _split_v2(state, emb, w)
                if V2C is None:
                    continue
                if not _place_children(state, emb, V2C, parts.L):
                    continue
                if not _place(emb, V1p, g.adj[u] & parts.L):
                    continue
                done = _finish(state, emb)
                if done is not None:
                    return done, _split_trace(state, "small_v1p_w2", attempts, dec.V2, V2C, "2")
    return None, StrategyTrace(name="small_v1p_w2", guard=bool(heavy) and small_side, candidates=attempts)


def _heavy_n_tilde_vertex(state: StrategyState) -> Attempt:
    """Needs |V1 ∪ V2| < k/2: r2 onto v in Ñ with deg_L(v) >= k/4, r1 onto a
    (B ∪ C)-neighbour u; V2 and V1 onto L, all of W1 ∪ W2 left as leaves."""
    g, dec, parts = state.g, state.decomposition, state.partition
    heavy = [v for v in iter_bits(parts.N_tilde) if 4 * g.degree_into(v, parts.L) >= state.k]
    small_side = 2 * (len(dec.V1) + len(dec.V2)) < state.k
    V1, V2 = sorted(dec.V1), sorted(dec.V2)
    attempts = 0
    if small_side:
        for v in heavy:
            for u in iter_bits(g.adj[v] & (parts.B | parts.C)):
                attempts += 1
                emb = state.fresh()
                emb.assign(dec.r2, v)
                emb.assign(dec.r1, u)
                if not _place(emb, V2, g.adj[v] & parts.L):
                    continue
                if not _place(emb, V1, g.adj[u] & parts.L):
                    continue
                done = _finish(state, emb)
                if done is not None:
                    return done, StrategyTrace(name="heavy_n_tilde_vertex", guard=True, candidates=attempts, succeeded=True)
    return None, StrategyTrace(name="heavy_n_tilde_vertex", guard=bool(heavy) and small_side, candidates=attempts)


STRATEGIES: Tuple[Tuple[str, Callable[[StrategyState], Attempt]], ...] = (
    ("b_b_edge", _b_b_edge),
    ("heavy_n_vertex", _heavy_n_vertex),
    ("x_c_edge", _x_c_edge),
    ("heavy_cl_vertex", _heavy_cl_vertex),
    ("small_v1p_w2", _small_v1p_w2),
    ("heavy_n_tilde_vertex", _heavy_n_tilde_vertex),
)


# --- 公開API / Public entry points ---

def _check_guest(k: int, t: Tree, max_diameter: int) -> None:
    if t.size > k:
        raise PreconditionError(f"tree has {t.size} edges, more than k={k}")
    if t.diameter > max_diameter:
        raise PreconditionError(f"tree diameter {t.diameter} exceeds {max_diameter}")


def _double_star_centers(t: Tree) -> Tuple[int, int]:
    for u, v in sorted(tuple(sorted(e)) for e in t.edges):
        du, dv = t.distances_from(u), t.distances_from(v)
        if all(min(a, b) <= 1 for a, b in zip(du, dv)):
            return u, v
    raise PreconditionError("tree is not a double star")


def embed_diam3(g: Graph, k: int, t: Tree) -> Embedding:
    """Double stars: the two centres go onto an edge inside L, the leaves follow greedily."""
    _check_guest(k, t, 3)
    inst = LksInstance(g, k)
    if not inst.hypothesis:
        raise HypothesisNotMetError(f"{inst.large} of {g.n} vertices have degree >= {k}")
    if g.n == 0:
        raise PreconditionError("empty host")
    L = lks_partition(inst).L
    if t.order == 1:
        return Embedding(t, g, {0: lowest(L) if L else 0})
    r1, r2 = _double_star_centers(t)
    for u in iter_bits(L):
        v = lowest(g.adj[u] & L)
        if v is None:
            continue
        emb = Embedding(t, g, {r1: u, r2: v})
        return greedy_leaf_completion(emb, emb.unassigned())
    raise HypothesisNotMetError("no edge joins two vertices of degree >= k")


def _empty_failure(hypothesis: bool) -> CascadeFailure:
    return CascadeFailure(hypothesis=hypothesis, reduced=False, strategies=[], evidence={}, partition={})


def embed_diam5(g: Graph, k: int, t: Tree, reduce: bool = True) -> Union[Embedding, CascadeFailure]:
    """
    直径5以下の木を構成的に埋め込む。
    Runs the configuration cascade and returns the first total embedding.

    The host is reduced edge-minimally first when the hypothesis holds (and
    ``reduce`` is set); otherwise the cascade runs on g itself. A CascadeFailure
    lists every guard evaluation and the structural predicates of the final host.
    """
    _check_guest(k, t, 5)
    inst = LksInstance(g, k)
    if g.n == 0:
        return _empty_failure(inst.hypothesis)
    if t.order == 1:
        L = lks_partition(inst).L
        return Embedding(t, g, {0: lowest(L) if L else 0})
    reduced = inst.hypothesis and reduce
    host = edge_minimal_reduce(inst) if reduced else g
    r1, r2 = center_edge(t)
    decomposition = level_sets(t, r1, r2)
    parts = abcd_partition(host, k, lks_partition(LksInstance(host, k)))
    state = StrategyState(host, k, decomposition, parts)
    traces: List[StrategyTrace] = []
    for name, strategy in STRATEGIES:
        emb, trace = strategy(state)
        logger.debug("cascade %s: guard=%s candidates=%d", name, trace.guard, trace.candidates)
        traces.append(trace)
        if emb is not None:
            return Embedding(t, g, emb.assignment)
    if inst.hypothesis:
        logger.warning("diameter-5 cascade failed although the hypothesis holds (n=%d, k=%d)", g.n, k)
    return CascadeFailure(
        hypothesis=inst.hypothesis,
        reduced=reduced,
        strategies=traces,
        evidence=chain_evidence(host, k, parts),
        partition=parts.to_json(),
    )


def solve_diam5(g: Graph, k: int, t: Tree) -> EmbedResult:
    """embed_diam5 wrapped into a result record, with oracle diagnostics on failure."""
    outcome = embed_diam5(g, k, t)
    if isinstance(outcome, Embedding):
        return EmbedResult(
            status=EmbedStatus.EMBEDDED, method="diam5", k=k,
            hypothesis=hypothesis_holds(g, k), embedding=outcome.pairs(),
        )
    return diagnose_failure(g, k, t, "diam5", failure=outcome)
