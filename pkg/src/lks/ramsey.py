"""
木のラムゼー数の小規模検証。
Small-scale Ramsey verification for pairs of trees: the reduction from two-colourings
to the degree hypothesis, exhaustive colouring search, and the closed form for stars.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from tqdm import tqdm

from .config import get_settings
from .errors import CapExceededError, LksError, PreconditionError
from .graph_core import Graph, Tree, enumerate_trees, labeled_graph, labeled_graph_count, vertex_pairs
from .oracle import brute_embed, hypothesis_holds, verify_embedding
from .routing import classify, embed_with

logger = logging.getLogger(__name__)

# masks per worker task when the colouring space is split
CHUNK_BITS = 14


class Color(str, Enum):
    RED = "RED"
    BLUE = "BLUE"


@dataclass(frozen=True)
class EdgeColoring:
    """Two-colouring of K_n; bit i of ``red`` set means pair i of ``vertex_pairs(n)`` is red."""

    n: int
    red: int

    @property
    def full(self) -> int:
        return labeled_graph_count(self.n) - 1

    def graph(self, color: Color) -> Graph:
        mask = self.red if color == Color.RED else self.full & ~self.red
        return labeled_graph(self.n, mask)

    def to_json(self) -> Dict[str, object]:
        pairs = vertex_pairs(self.n)
        return {
            "n": self.n,
            "red": [list(pairs[i]) for i in range(len(pairs)) if self.red >> i & 1],
            "blue": [list(pairs[i]) for i in range(len(pairs)) if not self.red >> i & 1],
        }


def all_colorings(n: int) -> Iterator[EdgeColoring]:
    for mask in range(labeled_graph_count(n)):
        yield EdgeColoring(n, mask)


def ramsey_reduction(col: EdgeColoring, k: int, m: int) -> Color:
    """RED if the red graph meets the degree hypothesis at threshold k, else BLUE
    (whose graph then meets it at threshold m = n - k)."""
    if k + m != col.n:
        raise PreconditionError(f"k + m = {k + m} differs from n = {col.n}")
    if hypothesis_holds(col.graph(Color.RED), k):
        return Color.RED
    if hypothesis_holds(col.graph(Color.BLUE), m):
        return Color.BLUE
    raise LksError(f"neither colour class meets its threshold for red mask {col.red:#x} (k={k}, m={m})")


def contains_mono_tree(col: EdgeColoring, t: Tree, color: Color) -> bool:
    return brute_embed(col.graph(color), t) is not None


def _check_coloring_cap(n: int) -> None:
    cap = get_settings().coloring_cap
    if n > cap:
        raise CapExceededError(f"colouring enumeration at n={n} exceeds cap {cap}")


def _first_avoiding(t1: Tree, t2: Tree, n: int, start: int, stop: int) -> int:
    """Smallest red mask in [start, stop) with neither red t1 nor blue t2; -1 if none."""
    full = labeled_graph_count(n) - 1
    for mask in range(start, stop):
        red = labeled_graph(n, mask)
        if red.m >= t1.size and brute_embed(red, t1) is not None:
            continue
        blue = labeled_graph(n, full & ~mask)
        if blue.m >= t2.size and brute_embed(blue, t2) is not None:
            continue
        return mask
    return -1


def _chunks(total: int) -> List[Tuple[int, int]]:
    size = 1 << CHUNK_BITS
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def find_avoiding_coloring(t1: Tree, t2: Tree, n: int, jobs: int = 1) -> Optional[EdgeColoring]:
    """A colouring of K_n with no red t1 and no blue t2, or None if every colouring has one."""
    _check_coloring_cap(n)
    chunks = _chunks(labeled_graph_count(n))
    if jobs <= 1 or len(chunks) == 1:
        for lo, hi in chunks:
            mask = _first_avoiding(t1, t2, n, lo, hi)
            if mask >= 0:
                return EdgeColoring(n, mask)
        return None
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        found = pool.map(_first_avoiding, *zip(*((t1, t2, n, lo, hi) for lo, hi in chunks)))
        masks = [mask for mask in found if mask >= 0]
    return EdgeColoring(n, min(masks)) if masks else None


def ramsey_check(t1: Tree, t2: Tree, n: int, jobs: int = 1) -> bool:
    """True iff every two-colouring of K_n has a red t1 or a blue t2."""
    return find_avoiding_coloring(t1, t2, n, jobs) is None


def ramsey_number(t1: Tree, t2: Tree, jobs: int = 1) -> int:
    """Smallest n with ramsey_check true, searched upwards from max(|t1|, |t2|)."""
    cap = get_settings().coloring_cap
    for n in range(max(t1.order, t2.order), cap + 1):
        if ramsey_check(t1, t2, n, jobs):
            return n
    raise CapExceededError(f"Ramsey number exceeds the colouring cap {cap}")


def star_ramsey(k: int, m: int) -> int:
    """r(K_{1,k}, K_{1,m}): k + m - 1 when both are even, k + m otherwise."""
    if k < 1 or m < 1:
        raise PreconditionError("star sizes must be positive")
    return k + m - 1 if k % 2 == 0 and m % 2 == 0 else k + m


def _is_star(t: Tree) -> bool:
    return t.order >= 2 and max(t.degree(v) for v in range(t.order)) == t.size


# --- 表 / Tables ---

def tree_pairs(max_total: int) -> Iterator[Tuple[Tree, Tree]]:
    """Unordered pairs of non-isomorphic trees with k, m >= 1 edges and k + m <= max_total."""
    for k in range(1, max_total):
        for m in range(k, max_total - k + 1):
            first, second = list(enumerate_trees(k)), list(enumerate_trees(m))
            for i, t1 in enumerate(first):
                for j, t2 in enumerate(second):
                    if k == m and j < i:
                        continue
                    yield t1, t2


def ramsey_table(max_total: int, jobs: int = 1, progress: bool = False) -> pd.DataFrame:
    """One row per tree pair: exhaustive r, the k + m bound, attainers and the star formula."""
    rows = []
    pairs = list(tree_pairs(max_total))
    for t1, t2 in tqdm(pairs, desc="ramsey", disable=not progress):
        r = ramsey_number(t1, t2, jobs)
        both_stars = _is_star(t1) and _is_star(t2)
        rows.append({
            "t1": t1.canonical_code,
            "t2": t2.canonical_code,
            "k": t1.size,
            "m": t2.size,
            "r": r,
            "bound": t1.size + t2.size,
            "within_bound": r <= t1.size + t2.size,
            "attains_bound": r == t1.size + t2.size,
            "star_formula": star_ramsey(t1.size, t2.size) if both_stars else None,
        })
    columns = ["t1", "t2", "k", "m", "r", "bound", "within_bound", "attains_bound", "star_formula"]
    return pd.DataFrame(rows, columns=columns)


def star_table(max_total: int, jobs: int = 1) -> pd.DataFrame:
    rows = []
    for k in range(1, max_total):
        for m in range(k, max_total - k + 1):
            r = ramsey_number(Tree.star(k), Tree.star(m), jobs)
            rows.append({"k": k, "m": m, "r": r, "formula": star_ramsey(k, m), "matches": r == star_ramsey(k, m)})
    return pd.DataFrame(rows, columns=["k", "m", "r", "formula", "matches"])


# --- 還元の検証 / Reduction checks ---

class ReductionReport(BaseModel):
    n: int
    colorings: int
    checks: int
    violations: List[Dict[str, int]] = Field(default_factory=list)


def check_reduction(
    n: int, samples: Optional[int] = None, rng: Optional[np.random.Generator] = None
) -> ReductionReport:
    """For each colouring (exhaustive, or ``samples`` random ones) and every split
    k + m = n, the side returned by ramsey_reduction meets its threshold."""
    total = labeled_graph_count(n)
    if samples is None:
        _check_coloring_cap(n)
        masks: List[int] = list(range(total))
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        width = (total.bit_length() + 6) // 8
        masks = [int.from_bytes(rng.bytes(width), "little") & (total - 1) for _ in range(samples)]
    report = ReductionReport(n=n, colorings=len(masks), checks=0)
    for mask in masks:
        col = EdgeColoring(n, mask)
        for k in range(1, n):
            report.checks += 1
            try:
                side = ramsey_reduction(col, k, n - k)
            except LksError:
                report.violations.append({"red": mask, "k": k})
                continue
            threshold = k if side == Color.RED else n - k
            if not hypothesis_holds(col.graph(side), threshold):
                report.violations.append({"red": mask, "k": k})
    return report


class ChainReport(BaseModel):
    t1: str
    t2: str
    n: int
    colorings: int
    covered: bool
    failures: List[int] = Field(default_factory=list)


def embedding_chain(t1: Tree, t2: Tree) -> ChainReport:
    """For every colouring of K_{k+m}, embeds t1 in red or t2 in blue through the
    side picked by ramsey_reduction, using the constructive router."""
    k, m = t1.size, t2.size
    n = k + m
    _check_coloring_cap(n)
    covered = classify(t1, n) != "oracle" and classify(t2, n) != "oracle"
    report = ChainReport(t1=t1.canonical_code, t2=t2.canonical_code, n=n, colorings=0, covered=covered)
    for col in all_colorings(n):
        report.colorings += 1
        side = ramsey_reduction(col, k, m)
        tree, threshold = (t1, k) if side == Color.RED else (t2, m)
        host = col.graph(side)
        result = embed_with(host, threshold, tree)
        pairs = dict(result.embedding or [])
        if not result.found or not verify_embedding(host, tree, pairs):
            report.failures.append(col.red)
    return report


def table_records(table: pd.DataFrame) -> List[Dict[str, object]]:
    """JSON-ready rows; missing star formulas become null."""
    return table.astype(object).where(table.notna(), None).to_dict(orient="records")
