"""
小規模グラフ全列挙による予想と定理の検証、およびランダム化スイート。
Desk-scale verification harness: the exhaustive sweep over labelled hosts and the
seeded random caterpillar suite.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from .config import get_settings
from .embed_caterpillar import shape_is_covered, solve_caterpillar
from .errors import CapExceededError, PreconditionError
from .formats import graph_to_graph6
from .graph_core import Graph, Tree, enumerate_trees, labeled_graph, labeled_graph_count
from .oracle import brute_embed, hypothesis_holds, verify_embedding
from .results import EmbedResult, EmbedStatus
from .routing import classify, covered_shape, embed_with
from .taxonomy import CaterpillarShape, reconstruct

logger = logging.getLogger(__name__)

CLASSES = ("all", "diam5", "caterpillar")
K_MODES = ("all", "loebl")
CHUNK_BITS = 12
# status used when a constructive method returns a map that fails verification
INVALID_EMBEDDING = "INVALID_EMBEDDING"


class Violation(BaseModel):
    n: int
    k: int
    graph6: str
    tree: List[Tuple[int, int]]
    status: str
    method: str


class SweepCounts(BaseModel):
    graphs: int = 0
    instances: int = 0
    hypothesis_instances: int = 0
    embedded: int = 0
    cascade_failures: int = 0
    conjecture_gaps: int = 0
    counterexamples: int = 0
    invalid: int = 0

    def add(self, other: "SweepCounts") -> None:
        for name in SweepCounts.model_fields:
            setattr(self, name, getattr(self, name) + getattr(other, name))


class SweepReport(BaseModel):
    n_max: int
    restrict: str
    k_mode: str
    totals: SweepCounts = Field(default_factory=SweepCounts)
    per_n: Dict[str, SweepCounts] = Field(default_factory=dict)
    violations: List[Violation] = Field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations and self.totals.conjecture_gaps == 0


def _k_values(n: int, k_mode: str) -> List[int]:
    if k_mode == "loebl":
        return [(n + 1) // 2]
    return list(range(1, n + 1))


def _trees_for(n: int, k: int, restrict: str) -> List[Tuple[Tree, str]]:
    """Guest trees with 1..k edges in the filter class, each with the method to run."""
    selected = []
    for size in range(1, min(k, n - 1) + 1):
        for t in enumerate_trees(size):
            if restrict == "diam5" and t.diameter <= 5:
                selected.append((t, "diam5"))
            elif restrict == "caterpillar" and covered_shape(t, n) is not None:
                selected.append((t, "caterpillar"))
            elif restrict == "all":
                selected.append((t, "auto"))
    return selected


def _check_instance(g: Graph, k: int, t: Tree, method: str, counts: SweepCounts) -> Optional[str]:
    """Counts one hypothesis instance; returns a violation status or None."""
    if brute_embed(g, t) is None:
        counts.counterexamples += 1
        return EmbedStatus.COUNTEREXAMPLE.value
    result: EmbedResult = embed_with(g, k, t, method)
    if not result.found:
        if result.failure is not None:
            counts.cascade_failures += 1
        if result.status == EmbedStatus.CONJECTURE_GAP:
            counts.conjecture_gaps += 1
        return result.status.value
    if not verify_embedding(g, t, dict(result.embedding or [])):
        counts.invalid += 1
        return INVALID_EMBEDDING
    counts.embedded += 1
    return None


def _sweep_chunk(n: int, start: int, stop: int, restrict: str, k_mode: str) -> Tuple[SweepCounts, List[Violation]]:
    counts = SweepCounts()
    violations: List[Violation] = []
    trees = {k: _trees_for(n, k, restrict) for k in _k_values(n, k_mode)}
    for mask in range(start, stop):
        g = labeled_graph(n, mask)
        counts.graphs += 1
        for k, guests in trees.items():
            counts.instances += len(guests)
            if not guests or not hypothesis_holds(g, k):
                continue
            for t, method in guests:
                counts.hypothesis_instances += 1
                status = _check_instance(g, k, t, method, counts)
                if status is not None:
                    violations.append(Violation(
                        n=n, k=k, graph6=graph_to_graph6(g), tree=list(t.edges), status=status,
                        method=method if method != "auto" else classify(t, n),
                    ))
    return counts, violations


def _chunks(n_max: int) -> Iterator[Tuple[int, int, int]]:
    size = 1 << CHUNK_BITS
    for n in range(1, n_max + 1):
        total = labeled_graph_count(n)
        for lo in range(0, total, size):
            yield n, lo, min(lo + size, total)


def verify_conjecture_sweep(
    n_max: int, restrict: str = "all", jobs: int = 1, k_mode: str = "all", progress: bool = False
) -> SweepReport:
    """
    n_max 以下の全ラベル付きグラフ、全 k、制限クラスの全ての木について仮説成立時の埋め込みを確認する。
    For every labelled host on n <= n_max vertices, every k and every tree in the
    filter class: when the hypothesis holds, brute force and the constructive method
    must both embed the tree and the result must verify. Violations are report entries.
    """
    if restrict not in CLASSES:
        raise PreconditionError(f"unknown tree class {restrict!r}; expected one of {CLASSES}")
    if k_mode not in K_MODES:
        raise PreconditionError(f"unknown k mode {k_mode!r}; expected one of {K_MODES}")
    cap = get_settings().graph_enum_cap
    if n_max > cap:
        raise CapExceededError(f"sweep at n={n_max} exceeds the enumeration cap {cap}")
    report = SweepReport(n_max=n_max, restrict=restrict, k_mode=k_mode)
    chunks = list(_chunks(n_max))
    logger.info("sweeping %d chunks up to n=%d (class=%s, k=%s)", len(chunks), n_max, restrict, k_mode)
    if jobs <= 1:
        outcomes = (_sweep_chunk(n, lo, hi, restrict, k_mode) for n, lo, hi in chunks)
        results = list(tqdm(outcomes, total=len(chunks), desc="sweep", disable=not progress))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = list(zip(*chunks)) + [[restrict] * len(chunks), [k_mode] * len(chunks)]
            results = list(tqdm(pool.map(_sweep_chunk, *args), total=len(chunks), desc="sweep", disable=not progress))
    # pool.map preserves submission order, so merging is deterministic
    for (n, _, _), (counts, violations) in zip(chunks, results):
        report.per_n.setdefault(str(n), SweepCounts()).add(counts)
        report.totals.add(counts)
        report.violations.extend(violations)
    report.violations.sort(key=lambda v: (v.n, v.k, v.graph6, v.tree))
    if report.violations:
        logger.warning("sweep found %d violations", len(report.violations))
    return report


# --- ランダム化スイート / Randomized caterpillar suite ---

def planted_host(n: int, k: int, rng: np.random.Generator) -> Graph:
    """A random ceil(n/2) of the vertices are each joined to k random others."""
    if not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n, got k={k}, n={n}")
    edges = set()
    for v in rng.choice(n, size=(n + 1) // 2, replace=False):
        others = [u for u in range(n) if u != v]
        for u in rng.choice(others, size=k, replace=False):
            edges.add((min(int(v), int(u)), max(int(v), int(u))))
    return Graph.from_edges(n, sorted(edges))


def random_shape(k: int, n: int, rng: np.random.Generator, attempts: int = 200) -> Optional[CaterpillarShape]:
    """A C(a,b,c,d,e) with k edges, l >= c and the caterpillar procedures applicable for n."""
    for _ in range(attempts):
        a, b, c, d, e = (int(x) for x in rng.multinomial(k, [0.2] * 5))
        shape = CaterpillarShape.of(a, b, c, d, e)
        if shape.ell >= shape.c and shape_is_covered(shape, n):
            return shape
    return None


class SuiteFailure(BaseModel):
    n: int
    k: int
    shape: str
    graph6: str
    status: str


class SuiteReport(BaseModel):
    seed: int
    count: int
    attempted: int = 0
    embedded: int = 0
    skipped: int = 0
    statuses: Dict[str, int] = Field(default_factory=dict)
    failures: List[SuiteFailure] = Field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.embedded / self.attempted if self.attempted else 1.0


def random_caterpillar_suite(
    count: int, n_max: int = 30, seed: int = 0, n_min: int = 6, progress: bool = False
) -> SuiteReport:
    """Embeds random covered caterpillars into planted-hypothesis hosts and verifies each result."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(seed=seed, count=count)
    statuses: Counter = Counter()
    for _ in tqdm(range(count), desc="caterpillars", disable=not progress):
        n = int(rng.integers(n_min, n_max + 1))
        k = int(rng.integers(2, n))
        shape = random_shape(k, n, rng)
        if shape is None:
            report.skipped += 1
            continue
        g = planted_host(n, k, rng)
        t = reconstruct(shape)
        result = solve_caterpillar(g, k, t, shape, rng=rng)
        report.attempted += 1
        status = result.status.value
        if result.found and not verify_embedding(g, t, dict(result.embedding or [])):
            status = INVALID_EMBEDDING
        statuses[status] += 1
        if status == EmbedStatus.EMBEDDED.value:
            report.embedded += 1
        else:
            report.failures.append(SuiteFailure(n=n, k=k, shape=str(shape), graph6=graph_to_graph6(g), status=status))
    report.statuses = dict(sorted(statuses.items()))
    return report
