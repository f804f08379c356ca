"""
総当たりによる木埋め込みの判定と埋め込みの検証。
Exact brute-force tree embedding and embedding verification; the ground truth the
constructive embedders are checked against.
"""
from __future__ import annotations

import logging
from typing import List, Mapping, Optional, Tuple, Union

from .graph_core import Embedding, Graph, Tree, iter_bits
from .results import CascadeFailure, EmbedResult, EmbedStatus

logger = logging.getLogger(__name__)


def large_count(g: Graph, k: int) -> int:
    return sum(1 for d in g.degrees() if d >= k)


def hypothesis_holds(g: Graph, k: int) -> bool:
    """At least n/2 vertices of degree >= k, compared exactly as 2|L| >= n."""
    return 2 * large_count(g, k) >= g.n


def _guest_order(t: Tree) -> Tuple[List[int], List[int]]:
    """BFS order from the lowest-numbered vertex of maximum degree, with parents."""
    root = max(range(t.order), key=lambda v: (t.degree(v), -v))
    order, parent = [root], [-1] * t.order
    seen = {root}
    for v in order:
        for u in t.neighbors(v):
            if u not in seen:
                seen.add(u)
                parent[u] = v
                order.append(u)
    return order, parent


def brute_embed(g: Graph, t: Tree) -> Optional[Embedding]:
    """Backtracking search; returns an embedding iff one exists."""
    if t.order > g.n:
        return None
    order, parent = _guest_order(t)
    host_degree = g.degrees()
    guest_degree = [t.degree(v) for v in range(t.order)]
    image = [-1] * t.order

    def candidates(v: int, used: int) -> int:
        pool = g.full if parent[v] < 0 else g.adj[image[parent[v]]]
        return pool & ~used

    def search(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for h in iter_bits(candidates(v, used)):
            if host_degree[h] < guest_degree[v]:
                continue
            image[v] = h
            if search(i + 1, used | 1 << h):
                return True
        image[v] = -1
        return False

    if not search(0, 0):
        return None
    return Embedding(t, g, {v: image[v] for v in range(t.order)})


def verify_embedding(g: Graph, t: Tree, phi: Union[Embedding, Mapping[int, int]]) -> bool:
    """True iff phi is total, injective and maps every tree edge onto a host edge."""
    mapping = phi.assignment if isinstance(phi, Embedding) else phi
    if sorted(mapping) != list(range(t.order)):
        return False
    images = list(mapping.values())
    if any(not 0 <= h < g.n for h in images) or len(set(images)) != len(images):
        return False
    return all(g.has_edge(mapping[u], mapping[v]) for u, v in t.edges)


def diagnose_failure(
    g: Graph,
    k: int,
    t: Tree,
    method: str,
    failure: Optional[CascadeFailure] = None,
    notes: Optional[List[str]] = None,
) -> EmbedResult:
    """Classifies a constructive failure with the oracle.

    Hypothesis false: ordinary negative outcome. Hypothesis true: CONJECTURE_GAP when
    brute force embeds the guest, COUNTEREXAMPLE otherwise.
    """
    notes = list(notes or [])
    holds = hypothesis_holds(g, k)
    if not holds:
        notes.append(f"hypothesis failed: {large_count(g, k)} of {g.n} vertices have degree >= {k}")
        witness = brute_embed(g, t)
        if witness is not None:
            notes.append("brute force embeds the tree anyway")
            return EmbedResult(
                status=EmbedStatus.EMBEDDED, method="oracle", k=k, hypothesis=False,
                embedding=witness.pairs(), notes=notes, failure=failure,
            )
        return EmbedResult(status=EmbedStatus.HYPOTHESIS_FAILED, method=method, k=k, hypothesis=False,
                           notes=notes, failure=failure)
    witness = brute_embed(g, t)
    if witness is not None:
        logger.warning("CONJECTURE_GAP: %s failed on n=%d k=%d tree=%s", method, g.n, k, t.edges)
        notes.append(f"{method} failed while brute force embeds the tree")
        return EmbedResult(status=EmbedStatus.CONJECTURE_GAP, method=method, k=k, hypothesis=True,
                           embedding=witness.pairs(), notes=notes, failure=failure)
    logger.warning("COUNTEREXAMPLE: n=%d k=%d tree=%s", g.n, k, t.edges)
    notes.append("hypothesis holds and no embedding exists")
    return EmbedResult(status=EmbedStatus.COUNTEREXAMPLE, method=method, k=k, hypothesis=True,
                       notes=notes, failure=failure)


def oracle_result(g: Graph, k: int, t: Tree, notes: Optional[List[str]] = None) -> EmbedResult:
    holds = hypothesis_holds(g, k)
    notes = list(notes or [])
    emb = brute_embed(g, t)
    if emb is not None:
        return EmbedResult(status=EmbedStatus.EMBEDDED, method="oracle", k=k, hypothesis=holds,
                           embedding=emb.pairs(), notes=notes)
    if holds and t.size > k:
        notes.append(f"tree has {t.size} edges, more than k={k}")
        return EmbedResult(status=EmbedStatus.NOT_EMBEDDABLE, method="oracle", k=k, hypothesis=True, notes=notes)
    if holds:
        logger.warning("COUNTEREXAMPLE: n=%d k=%d tree=%s", g.n, k, t.edges)
        notes.append("hypothesis holds and no embedding exists")
        return EmbedResult(status=EmbedStatus.COUNTEREXAMPLE, method="oracle", k=k, hypothesis=True, notes=notes)
    notes.append(f"hypothesis failed: {large_count(g, k)} of {g.n} vertices have degree >= {k}")
    return EmbedResult(status=EmbedStatus.HYPOTHESIS_FAILED, method="oracle", k=k, hypothesis=False, notes=notes)
