"""
木の分類に応じた埋め込み手法の選択。
Chooses the embedding procedure for a guest tree: the diameter-5 cascade, the
caterpillar shifting/rotation procedure, or brute force for trees no constructive
method covers.
"""
from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from .embed_caterpillar import shape_is_covered, solve_caterpillar
from .embed_diam5 import solve_diam5
from .errors import PreconditionError
from .graph_core import Graph, Tree
from .oracle import oracle_result
from .results import EmbedResult
from .taxonomy import CaterpillarShape, all_shapes

logger = logging.getLogger(__name__)

METHODS = ("auto", "diam5", "caterpillar", "oracle")
UNSUPPORTED_BY_THEORY = "UNSUPPORTED_BY_THEORY"


def covered_shape(t: Tree, n: int) -> Optional[CaterpillarShape]:
    """First reading of t (longest body, largest tuple first) under which the
    caterpillar procedures apply to a host of order n."""
    ordered = sorted(all_shapes(t), key=lambda s: (s.body_length, s.as_tuple()), reverse=True)
    for shape in ordered:
        if shape.ell >= shape.c and shape_is_covered(shape, n):
            return shape
    return None


def classify(t: Tree, n: int) -> str:
    """'diam5', 'caterpillar' or 'oracle' for a host of order n."""
    if t.diameter <= 5:
        return "diam5"
    if covered_shape(t, n) is not None:
        return "caterpillar"
    return "oracle"


def embed_with(
    g: Graph, k: int, t: Tree, method: str = "auto",
    rng: Optional[np.random.Generator] = None, keep_trace: bool = False,
) -> EmbedResult:
    """Runs the requested method; ``auto`` picks one with classify."""
    if method not in METHODS:
        raise PreconditionError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "oracle":
        return oracle_result(g, k, t)
    if t.size > k:
        if method != "auto":
            raise PreconditionError(f"tree has {t.size} edges, more than k={k}")
        return oracle_result(g, k, t, notes=[f"tree has more than k={k} edges"])
    route = classify(t, g.n) if method == "auto" else method
    logger.debug("routing tree with %d edges to %s", t.size, route)
    if route == "diam5":
        return solve_diam5(g, k, t)
    if route == "caterpillar":
        shape = covered_shape(t, g.n)
        if shape is None:
            raise PreconditionError("tree is not a caterpillar covered for this host order")
        return solve_caterpillar(g, k, t, shape, rng=rng, keep_trace=keep_trace)
    return oracle_result(g, k, t, notes=[UNSUPPORTED_BY_THEORY])
