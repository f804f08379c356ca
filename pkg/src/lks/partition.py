"""
L/S 分割、辺極小化、および A/B/C/D 細分。
The L/S split, the edge-minimal reduction, and the A, B, C, D refinement with the
derived sets N, X and Ñ.

All half- and quarter-integral thresholds are compared on scaled integers
(``2 * deg >= k`` for deg >= k/2, ``4 * deg < k`` for deg < k/4).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List

from .errors import HypothesisNotMetError
from .graph_core import Graph, iter_bits, popcount, vertex_set
from .oracle import hypothesis_holds, large_count

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LksInstance:
    g: Graph
    k: int

    @property
    def n(self) -> int:
        return self.g.n

    @cached_property
    def large(self) -> int:
        return large_count(self.g, self.k)

    @cached_property
    def hypothesis(self) -> bool:
        return hypothesis_holds(self.g, self.k)


@dataclass(frozen=True)
class LksPartition:
    """L = vertices of degree >= k (bitset), S = the rest."""

    L: int
    S: int

    @property
    def large(self):
        return vertex_set(self.L)

    @property
    def small(self):
        return vertex_set(self.S)


def lks_partition(inst: LksInstance) -> LksPartition:
    L = 0
    for v, d in enumerate(inst.g.degrees()):
        if d >= inst.k:
            L |= 1 << v
    return LksPartition(L, inst.g.full & ~L)


def fits(required: int, available: int) -> bool:
    """Capacity check: ``required`` items fit into ``available`` free host slots.

    Sizes are exact integers, so a bound like |U| < x + 1 with deg >= x (x rational)
    reduces to this comparison.
    """
    return required <= available


def edge_minimal_reduce(inst: LksInstance) -> Graph:
    """
    仮説を保ったまま辺を辞書順に削除し、これ以上削れない部分グラフを返す。
    Deletes edges in lexicographic order while the hypothesis survives, repeating
    until no single deletion is possible. S of the result is independent.
    """
    if not inst.hypothesis:
        raise HypothesisNotMetError(
            f"{inst.large} of {inst.n} vertices have degree >= {inst.k}; cannot reduce"
        )
    k, n = inst.k, inst.n
    rows = list(inst.g.adj)
    degree = list(inst.g.degrees())
    large = inst.large
    removed = 0
    changed = True
    while changed:
        changed = False
        for u in range(n):
            for v in iter_bits(rows[u] >> (u + 1)):
                v += u + 1
                drop = (degree[u] == k) + (degree[v] == k)
                if 2 * (large - drop) < n:
                    continue
                rows[u] &= ~(1 << v)
                rows[v] &= ~(1 << u)
                degree[u] -= 1
                degree[v] -= 1
                large -= drop
                removed += 1
                changed = True
    logger.debug("edge_minimal_reduce: removed %d of %d edges (n=%d, k=%d)", removed, inst.g.m, n, k)
    return Graph(n, tuple(rows), inst.g.m - removed)


@dataclass(frozen=True)
class AbcdPartition:
    """Refinement of L and S as bitsets.

    A: L-vertices with fewer than k/2 neighbours in L; B = L minus A.
    C: S-vertices all of whose neighbours are in L, at least k/2 of them; D = S minus C.
    N = N(B) ∩ L, X = {v in L : deg_{C∪L}(v) >= k/2}, Ñ = N(B ∪ C) ∩ L.
    """

    L: int
    S: int
    A: int
    B: int
    C: int
    D: int
    N: int
    X: int
    N_tilde: int

    def to_json(self) -> Dict[str, List[int]]:
        names = ("L", "S", "A", "B", "C", "D", "N", "X", "N_tilde")
        return {name: list(iter_bits(getattr(self, name))) for name in names}


def abcd_partition(g: Graph, k: int, p: LksPartition) -> AbcdPartition:
    L, S = p.L, p.S
    A = B = C = 0
    for v in iter_bits(L):
        if 2 * g.degree_into(v, L) < k:
            A |= 1 << v
        else:
            B |= 1 << v
    for v in iter_bits(S):
        to_large = g.degree_into(v, L)
        if to_large == g.degree(v) and 2 * to_large >= k:
            C |= 1 << v
    D = S & ~C
    X = 0
    for v in iter_bits(L):
        if 2 * g.degree_into(v, C | L) >= k:
            X |= 1 << v
    N = g.neighborhood(B) & L
    N_tilde = g.neighborhood(B | C) & L
    return AbcdPartition(L, S, A, B, C, D, N, X, N_tilde)


def chain_evidence(g: Graph, k: int, parts: AbcdPartition) -> Dict[str, bool]:
    """Structural predicates a host must satisfy once every cascade configuration fails."""
    B, C = parts.B, parts.C
    b_independent = all(not g.adj[v] & B for v in iter_bits(B))
    return {
        "b_independent": b_independent,
        "n_light_into_b": all(4 * g.degree_into(v, B) < k for v in iter_bits(parts.N)),
        "n_at_least_twice_b": popcount(parts.N) >= 2 * popcount(B),
        "no_x_c_edges": all(not g.adj[v] & C for v in iter_bits(parts.X)),
        "x_equals_b": parts.X == B,
        "no_b_c_edges": all(not g.adj[v] & C for v in iter_bits(B)),
        "d_nonempty": parts.D != 0,
    }
