"""
極値構成: 予想の閾値 n/2 がほぼ最良であることを示すグラフ族。
Tightness constructions showing that the n/2 threshold can hardly be lowered, and
the lower bound on the number of high-degree vertices they imply.
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import List

from pydantic import BaseModel

from .errors import PreconditionError
from .formats import graph_to_graph6
from .graph_core import Edge, Graph, Tree
from .oracle import brute_embed, large_count

logger = logging.getLogger(__name__)


def _require_odd(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise PreconditionError(f"k must be a positive odd number, got {k}")


def tight_construction(k: int, n: int) -> Graph:
    """
    n/(k+1) 個の成分: 大きさ (k-1)/2 のクリーク A と大きさ (k+3)/2 の独立集合 B を完全に結ぶ。
    n/(k+1) components, each a clique A of size (k-1)/2 joined completely to an
    independent set B of size (k+3)/2. A-vertices have degree exactly k.
    """
    _require_odd(k)
    if n <= 0 or n % (k + 1):
        raise PreconditionError(f"n={n} must be a positive multiple of k+1={k + 1}")
    clique = (k - 1) // 2
    edges: List[Edge] = []
    for base in range(0, n, k + 1):
        A = range(base, base + clique)
        B = range(base + clique, base + k + 1)
        edges.extend(combinations(A, 2))
        edges.extend((a, b) for a in A for b in B)
    return Graph.from_edges(n, edges)


def spider(k: int) -> Tree:
    """Star with (k+1)/2 edges, all but one subdivided once; k edges in total."""
    _require_odd(k)
    legs = (k - 1) // 2
    edges: List[Edge] = []
    for i in range(legs):
        middle, tip = 1 + 2 * i, 2 + 2 * i
        edges.extend(((0, middle), (middle, tip)))
    edges.append((0, k))
    return Tree(k + 1, tuple(edges))


def expected_high_degree(k: int, n: int) -> int:
    return n // 2 - n // (k + 1)


def required_high_degree_lower_bound(n: int, k: int) -> int:
    """n/2 - 2*floor(n/(k+1)) - (n mod (k+1)), rounded up and clamped at 0."""
    if k < 0 or n < 0:
        raise PreconditionError("n and k must be non-negative")
    q, r = divmod(n, k + 1)
    return max(0, (n + 1) // 2 - 2 * q - r)


def pad_with_isolated(g: Graph, extra: int) -> Graph:
    return g.with_isolated(extra)


class TightnessReport(BaseModel):
    k: int
    n: int
    pad: int
    graph6: str
    high_degree: int
    expected_high_degree: int
    spider_embeds: bool
    lower_bound: int

    @property
    def consistent(self) -> bool:
        return not self.spider_embeds and self.high_degree == self.expected_high_degree


def tightness_witness(k: int, n: int, pad: int = 0) -> TightnessReport:
    """Builds the construction (plus ``pad`` isolated vertices) and checks with the oracle
    that spider(k) does not embed and that the high-degree count is n/2 - n/(k+1)."""
    g = pad_with_isolated(tight_construction(k, n), pad)
    report = TightnessReport(
        k=k,
        n=n,
        pad=pad,
        graph6=graph_to_graph6(g),
        high_degree=large_count(g, k),
        expected_high_degree=expected_high_degree(k, n),
        spider_embeds=brute_embed(g, spider(k)) is not None,
        lower_bound=required_high_degree_lower_bound(n + pad, k),
    )
    if not report.consistent:
        logger.error("tightness check failed for k=%d n=%d: %s", k, n, report)
    return report
