"""
ゲスト木の分類: 中心辺とレベル集合、キャタピラー形状、族 T(k, l, c) への所属判定。
Guest tree classification: centre edge and level sets for the diameter-5 embedder,
caterpillar shape recognition and T(k, l, c) membership.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, NonNegativeInt

from .errors import FormatError, PreconditionError
from .graph_core import Tree

logger = logging.getLogger(__name__)


# --- 中心辺とレベル集合 / Centre edge and level sets ---

def center_edge(t: Tree) -> Optional[Tuple[int, int]]:
    """First edge (lexicographic) within distance 2 of every vertex; None iff diameter > 5."""
    if t.order < 2:
        raise PreconditionError("a centre edge needs at least two vertices")
    for u, v in sorted(tuple(sorted(e)) for e in t.edges):
        du, dv = t.distances_from(u), t.distances_from(v)
        if all(min(a, b) <= 2 for a, b in zip(du, dv)):
            return u, v
    return None


@dataclass(frozen=True)
class CenterDecomposition:
    """Layers around a centre edge r1r2, oriented so that 2|V2 ∪ W1| < |E(T)|.

    V1/V2 are the neighbours of r1/r2 other than each other, W1/W2 the vertices
    at distance two behind them, and V1p/V2p the members of V1/V2 with children.
    """

    r1: int
    r2: int
    V1: FrozenSet[int]
    V2: FrozenSet[int]
    W1: FrozenSet[int]
    W2: FrozenSet[int]
    V1p: FrozenSet[int]
    V2p: FrozenSet[int]
    tree: Tree = field(compare=False, repr=False)

    def children(self, v: int) -> Tuple[int, ...]:
        """Children of a V1/V2 vertex (its W-neighbours)."""
        if v in self.V1:
            return tuple(u for u in self.tree.neighbors(v) if u != self.r1)
        if v in self.V2:
            return tuple(u for u in self.tree.neighbors(v) if u != self.r2)
        raise PreconditionError(f"vertex {v} is not in V1 or V2")

    def swapped(self) -> "CenterDecomposition":
        return CenterDecomposition(
            self.r2, self.r1, self.V2, self.V1, self.W2, self.W1, self.V2p, self.V1p, self.tree
        )

    def to_json(self) -> Dict[str, object]:
        return {
            "r1": self.r1,
            "r2": self.r2,
            "V1": sorted(self.V1),
            "V2": sorted(self.V2),
            "W1": sorted(self.W1),
            "W2": sorted(self.W2),
            "V1p": sorted(self.V1p),
            "V2p": sorted(self.V2p),
        }


def level_sets(t: Tree, r1: int, r2: int) -> CenterDecomposition:
    """
    中心辺 r1r2 のまわりの層を計算し、|V2 ∪ W1| < k/2 となる向きに揃える。
    Computes the layers around r1r2 and orients them so that |V2 ∪ W1| < k/2
    with k = |E(t)|; the roles of r1 and r2 are swapped when necessary.
    """
    if r2 not in t.neighbors(r1):
        raise PreconditionError(f"({r1}, {r2}) is not an edge of the tree")
    V1 = frozenset(u for u in t.neighbors(r1) if u != r2)
    V2 = frozenset(u for u in t.neighbors(r2) if u != r1)
    W1 = frozenset(w for v in V1 for w in t.neighbors(v) if w != r1)
    W2 = frozenset(w for v in V2 for w in t.neighbors(v) if w != r2)
    covered = {r1, r2} | V1 | V2 | W1 | W2
    if len(covered) != t.order:
        missing = sorted(set(range(t.order)) - covered)
        raise PreconditionError(f"vertices {missing} are farther than 2 from both ends of ({r1}, {r2})")
    V1p = frozenset(v for v in V1 if t.degree(v) > 1)
    V2p = frozenset(v for v in V2 if t.degree(v) > 1)
    decomposition = CenterDecomposition(r1, r2, V1, V2, W1, W2, V1p, V2p, t)
    if 2 * (len(V2) + len(W1)) < t.size:
        return decomposition
    # |V1 ∪ V2 ∪ W1 ∪ W2| = k - 1, so the swapped orientation satisfies the bound
    return decomposition.swapped()


# --- キャタピラー形状 / Caterpillar shapes ---

_SHAPE_PATTERN = re.compile(r"^\s*C\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


class CaterpillarShape(BaseModel):
    """C(a,b,c,d,e): a body path of length a+c+e with b leaves hung at body vertex a
    and d leaves at body vertex a+c."""

    model_config = ConfigDict(frozen=True)

    a: NonNegativeInt
    b: NonNegativeInt
    c: NonNegativeInt
    d: NonNegativeInt
    e: NonNegativeInt

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int, e: int) -> "CaterpillarShape":
        return cls(a=a, b=b, c=c, d=d, e=e)

    @classmethod
    def parse(cls, text: str) -> "CaterpillarShape":
        match = _SHAPE_PATTERN.match(text)
        if not match:
            raise FormatError(f"expected 'C(a,b,c,d,e)', got {text!r}")
        return cls.of(*(int(x) for x in match.groups()))

    def __str__(self) -> str:
        return f"C({self.a},{self.b},{self.c},{self.d},{self.e})"

    @property
    def k(self) -> int:
        return self.a + self.b + self.c + self.d + self.e

    @property
    def ell(self) -> int:
        return self.b + self.d

    @property
    def body_length(self) -> int:
        return self.a + self.c + self.e

    @property
    def joints(self) -> Tuple[int, int]:
        """Body positions of the two joints."""
        return self.a, self.a + self.c

    @property
    def ae(self) -> int:
        return min(self.a, self.e)

    @property
    def AE(self) -> int:
        return max(self.a, self.e)

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return self.a, self.b, self.c, self.d, self.e

    def reversed(self) -> "CaterpillarShape":
        return CaterpillarShape.of(self.e, self.d, self.c, self.b, self.a)


@dataclass(frozen=True)
class CaterpillarLayout:
    """A shape realised on a concrete tree: the body as tree vertices x_0..x_L and
    the star leaves hanging at each joint."""

    shape: CaterpillarShape
    body: Tuple[int, ...]
    first_star: Tuple[int, ...]
    second_star: Tuple[int, ...]

    @property
    def first_joint(self) -> int:
        return self.body[self.shape.a]

    @property
    def second_joint(self) -> int:
        return self.body[self.shape.a + self.shape.c]


def reconstruct(shape: CaterpillarShape) -> Tree:
    """Builds C(a,b,c,d,e) with body vertices 0..a+c+e and star leaves numbered after them."""
    length = shape.body_length
    edges = [(i, i + 1) for i in range(length)]
    first, second = shape.joints
    nxt = length + 1
    for joint, count in ((first, shape.b), (second, shape.d)):
        for _ in range(count):
            edges.append((joint, nxt))
            nxt += 1
    return Tree(nxt, tuple(edges))


def _tree_path(t: Tree, parents: List[int], target: int) -> Tuple[int, ...]:
    path = [target]
    while parents[path[-1]] >= 0:
        path.append(parents[path[-1]])
    return tuple(reversed(path))


def _bfs_parents(t: Tree, root: int) -> List[int]:
    parents = [-2] * t.order
    parents[root] = -1
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for u in t.neighbors(v):
                if parents[u] == -2:
                    parents[u] = v
                    nxt.append(u)
        frontier = nxt
    return parents


def _layouts_on_body(t: Tree, body: Tuple[int, ...]) -> Iterator[CaterpillarLayout]:
    position = {v: i for i, v in enumerate(body)}
    hanging: Dict[int, List[int]] = {}
    for v in range(t.order):
        if v in position:
            continue
        if t.degree(v) != 1 or t.neighbors(v)[0] not in position:
            return
        hanging.setdefault(position[t.neighbors(v)[0]], []).append(v)
    if len(hanging) > 2:
        return
    length = len(body) - 1
    spots = sorted(hanging)
    if not spots:
        for a in range(length + 1):
            for c in range(length - a + 1):
                yield CaterpillarLayout(CaterpillarShape.of(a, 0, c, 0, length - a - c), body, (), ())
        return
    if len(spots) == 2:
        p, q = spots
        yield CaterpillarLayout(
            CaterpillarShape.of(p, len(hanging[p]), q - p, len(hanging[q]), length - q),
            body, tuple(hanging[p]), tuple(hanging[q]),
        )
        return
    p = spots[0]
    leaves = tuple(hanging[p])
    for b in range(len(leaves) + 1):
        yield CaterpillarLayout(
            CaterpillarShape.of(p, b, 0, len(leaves) - b, length - p), body, leaves[:b], leaves[b:]
        )
    for q in range(p + 1, length + 1):
        yield CaterpillarLayout(CaterpillarShape.of(p, len(leaves), q - p, 0, length - q), body, leaves, ())
    for j in range(p):
        yield CaterpillarLayout(CaterpillarShape.of(j, 0, p - j, len(leaves), length - p), body, (), leaves)


def caterpillar_layouts(t: Tree) -> Iterator[CaterpillarLayout]:
    """Every way of reading t as some C(a,b,c,d,e), body taken along each ordered vertex pair."""
    if sum(1 for v in range(t.order) if t.degree(v) >= 3) > 2:
        return
    for x in range(t.order):
        parents = _bfs_parents(t, x)
        for y in range(t.order):
            yield from _layouts_on_body(t, _tree_path(t, parents, y))


def all_shapes(t: Tree) -> FrozenSet[CaterpillarShape]:
    return frozenset(layout.shape for layout in caterpillar_layouts(t))


def _canonical_key(shape: CaterpillarShape) -> Tuple[int, Tuple[int, ...]]:
    return shape.body_length, shape.as_tuple()


def caterpillar_decompose(t: Tree) -> Optional[CaterpillarShape]:
    """Canonical shape of t: longest body, then the lexicographically largest tuple."""
    shapes = all_shapes(t)
    if not shapes:
        return None
    return max(shapes, key=_canonical_key)


def caterpillar_layout(t: Tree, shape: Optional[CaterpillarShape] = None) -> CaterpillarLayout:
    """Layout of t realising ``shape`` (the canonical shape when omitted)."""
    if shape is None:
        shape = caterpillar_decompose(t)
        if shape is None:
            raise PreconditionError("tree is not a two-star caterpillar")
    for layout in caterpillar_layouts(t):
        if layout.shape == shape:
            return layout
    raise PreconditionError(f"tree does not have shape {shape}")


def shapes_in_family(t: Tree, k: int, ell: int, c: int) -> List[CaterpillarShape]:
    found: Set[CaterpillarShape] = {
        s for s in all_shapes(t) if s.k == k and s.ell == ell and s.c == c
    }
    return sorted(found, key=_canonical_key, reverse=True)


def family_membership(t: Tree, k: int, ell: int, c: int) -> bool:
    """True iff some reading C(a,b,c,d,e) of t has b+d = ell, joint distance c and k edges."""
    return bool(shapes_in_family(t, k, ell, c))
