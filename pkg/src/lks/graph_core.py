"""
ホストグラフと木の表現、および近傍・距離・列挙の基本操作。
Host graph and tree representations, plus the basic neighbourhood, distance and
enumeration operations every other module builds on.

Vertex sets are passed around internally as int bitsets (bit v set <=> vertex v
in the set); the public helpers accept and return plain vertex collections.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .config import get_settings
from .errors import CapExceededError, PreconditionError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


# --- ビットセット補助関数 / Bitset helpers ---

def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yields the members of a bitset in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> Optional[int]:
    if not mask:
        return None
    return (mask & -mask).bit_length() - 1


def vertex_set(mask: int) -> FrozenSet[int]:
    return frozenset(iter_bits(mask))


def _as_mask(vertices: Union[int, Iterable[int]]) -> int:
    return vertices if isinstance(vertices, int) else mask_of(vertices)


# --- グラフ / Graph ---

@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 with bitset adjacency rows.

    Build instances through the classmethods; the raw constructor trusts its
    arguments (the enumeration hot paths rely on that).
    """

    n: int
    adj: Tuple[int, ...]
    m: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        cap = get_settings().max_vertices
        if n < 0 or n > cap:
            raise CapExceededError(f"graph order {n} outside [0, {cap}]")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), sum(popcount(r) for r in rows) // 2)

    @classmethod
    def from_adjacency(cls, rows: Sequence[int]) -> "Graph":
        n = len(rows)
        for u, row in enumerate(rows):
            if row >> n:
                raise PreconditionError(f"row {u} references vertices beyond {n - 1}")
            if row >> u & 1:
                raise PreconditionError(f"loop at vertex {u}")
            for v in iter_bits(row):
                if not rows[v] >> u & 1:
                    raise PreconditionError(f"adjacency not symmetric on ({u}, {v})")
        return cls.from_edges(n, ((u, v) for u, row in enumerate(rows) for v in iter_bits(row) if u < v))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, ())

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise PreconditionError("a simple cycle needs at least 3 vertices")
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> int:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degree_into(self, v: int, mask: int) -> int:
        return popcount(self.adj[v] & mask)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(popcount(row) for row in self.adj)

    def edges(self) -> Iterator[Edge]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    def neighborhood(self, mask: int) -> int:
        """N(X) as a bitset: union of neighbourhoods minus X itself."""
        union = 0
        for v in iter_bits(mask):
            union |= self.adj[v]
        return union & ~mask

    def without_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows), self.m - 1 if self.has_edge(u, v) else self.m)

    def with_isolated(self, extra: int) -> "Graph":
        cap = get_settings().max_vertices
        if extra < 0:
            raise PreconditionError("cannot pad with a negative number of vertices")
        if self.n + extra > cap:
            raise CapExceededError(f"padding to {self.n + extra} vertices exceeds cap {cap}")
        return Graph(self.n + extra, self.adj + (0,) * extra, self.m)

    def complement(self) -> "Graph":
        full = self.full
        rows = tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj))
        return Graph(self.n, rows, self.n * (self.n - 1) // 2 - self.m)


# --- 木 / Tree ---

@dataclass(frozen=True)
class Tree:
    """Connected acyclic guest graph on vertices 0..order-1."""

    order: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.order < 1:
            raise PreconditionError("a tree needs at least one vertex")
        if len(self.edges) != self.order - 1:
            raise PreconditionError(f"tree on {self.order} vertices needs {self.order - 1} edges, got {len(self.edges)}")
        parent = list(range(self.order))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            if not (0 <= u < self.order and 0 <= v < self.order) or u == v:
                raise PreconditionError(f"invalid tree edge ({u}, {v})")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise PreconditionError(f"edge ({u}, {v}) closes a cycle")
            parent[ru] = rv

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], order: Optional[int] = None) -> "Tree":
        edge_list = tuple((int(u), int(v)) for u, v in edges)
        if order is None:
            order = 1 + max((max(e) for e in edge_list), default=0)
        return cls(order, edge_list)

    @classmethod
    def path(cls, order: int) -> "Tree":
        return cls(order, tuple((i, i + 1) for i in range(order - 1)))

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        rows: List[List[int]] = [[] for _ in range(self.order)]
        for u, v in self.edges:
            rows[u].append(v)
            rows[v].append(u)
        return tuple(tuple(sorted(r)) for r in rows)

    @property
    def size(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def leaves(self) -> Tuple[int, ...]:
        return tuple(v for v in range(self.order) if self.degree(v) <= 1)

    def as_graph(self) -> Graph:
        return Graph.from_edges(self.order, self.edges)

    def distances_from(self, source: int) -> List[int]:
        dist = [-1] * self.order
        dist[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for u in self.adjacency[v]:
                    if dist[u] < 0:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist

    @cached_property
    def diameter(self) -> int:
        return max(max(self.distances_from(v)) for v in range(self.order))

    def centers(self) -> Tuple[int, ...]:
        """The one or two vertices of minimum eccentricity."""
        ecc = [max(self.distances_from(v)) for v in range(self.order)]
        best = min(ecc)
        return tuple(v for v in range(self.order) if ecc[v] == best)

    def rooted_code(self, root: int) -> str:
        """AHU parenthesis encoding of the tree rooted at ``root``."""

        def encode(v: int, parent: int) -> str:
            return "(" + "".join(sorted(encode(u, v) for u in self.adjacency[v] if u != parent)) + ")"

        return encode(root, -1)

    @cached_property
    def canonical_code(self) -> str:
        """Isomorphism invariant: smallest rooted code over the centres."""
        return min(self.rooted_code(c) for c in self.centers())

    def is_isomorphic(self, other: "Tree") -> bool:
        return self.order == other.order and self.canonical_code == other.canonical_code


# --- ホスト上のパス / Paths in a host ---

@dataclass(frozen=True)
class HostPath:
    """Ordered vertex sequence x_0 ... x_m of a host path."""

    vertices: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def reversed(self) -> "HostPath":
        return HostPath(self.vertices[::-1])

    def mask(self) -> int:
        return mask_of(self.vertices)

    def is_valid_in(self, g: Graph) -> bool:
        if not self.vertices or len(set(self.vertices)) != len(self.vertices):
            return False
        if any(not 0 <= v < g.n for v in self.vertices):
            return False
        return all(g.has_edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))


# --- 埋め込み / Embeddings ---

class Embedding:
    """Partial injective map from guest (tree) vertices to host vertices."""

    def __init__(self, tree: Tree, graph: Graph, assignment: Optional[Dict[int, int]] = None):
        self.tree = tree
        self.graph = graph
        self.assignment: Dict[int, int] = {}
        self.used = 0
        for guest, host in (assignment or {}).items():
            self.assign(guest, host)

    def assign(self, guest: int, host: int) -> None:
        if guest in self.assignment:
            raise PreconditionError(f"guest vertex {guest} is already mapped")
        if self.used >> host & 1:
            raise PreconditionError(f"host vertex {host} is already used")
        self.assignment[guest] = host
        self.used |= 1 << host

    def image(self, guest: int) -> Optional[int]:
        return self.assignment.get(guest)

    @property
    def is_total(self) -> bool:
        return len(self.assignment) == self.tree.order

    def unassigned(self) -> List[int]:
        return [v for v in range(self.tree.order) if v not in self.assignment]

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.assignment.items())

    def copy(self) -> "Embedding":
        return Embedding(self.tree, self.graph, dict(self.assignment))

    def __repr__(self) -> str:
        return f"Embedding({self.pairs()})"


# --- 基本操作 / Basic operations ---

def neighborhood_of_set(g: Graph, vertices: Iterable[int]) -> FrozenSet[int]:
    """N(X): every neighbour of a member of X that is not itself in X."""
    return vertex_set(g.neighborhood(mask_of(vertices)))


def degree_into(g: Graph, v: int, vertices: Union[int, Iterable[int]]) -> int:
    """deg_X(v) = |N(v) ∩ X|."""
    return g.degree_into(v, _as_mask(vertices))


def edges_between(g: Graph, first: Union[int, Iterable[int]], second: Union[int, Iterable[int]]) -> int:
    """e(Y, Z) for disjoint Y, Z, counted as the sum over Y of deg_Z."""
    second_mask = _as_mask(second)
    return sum(g.degree_into(v, second_mask) for v in iter_bits(_as_mask(first)))


def bfs_distances(g: Graph, source: int) -> List[int]:
    """Edge distances from ``source``; -1 marks unreachable vertices."""
    dist = [-1] * g.n
    frontier = seen = 1 << source
    level = 0
    while frontier:
        reached = 0
        for v in iter_bits(frontier):
            dist[v] = level
            reached |= g.adj[v]
        frontier = reached & ~seen
        seen |= frontier
        level += 1
    return dist


def distance(g: Graph, u: int, v: int) -> Optional[int]:
    """Shortest-path length between u and v, or None if they are disconnected."""
    d = bfs_distances(g, u)[v]
    return None if d < 0 else d


def graph_diameter(g: Graph) -> Union[int, float]:
    """Largest pairwise distance; ``math.inf`` when g is disconnected."""
    best = 0
    for source in range(g.n):
        dist = bfs_distances(g, source)
        if -1 in dist:
            return math.inf
        best = max(best, max(dist))
    return best


# --- 列挙 / Enumeration ---

@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> Tuple[Edge, ...]:
    """Unordered pairs of 0..n-1 in lexicographic order; pair i is edge-mask bit i."""
    return tuple(combinations(range(n), 2))


def labeled_graph(n: int, mask: int) -> Graph:
    """The labelled graph whose edge set is selected by ``mask`` over ``vertex_pairs(n)``."""
    pairs = vertex_pairs(n)
    rows = [0] * n
    for i in iter_bits(mask):
        u, v = pairs[i]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows), popcount(mask))


def labeled_graph_count(n: int) -> int:
    return 1 << len(vertex_pairs(n))


def enumerate_labeled_graphs(n: int, start: int = 0, stop: Optional[int] = None) -> Iterator[Graph]:
    """Every labelled simple graph on n vertices, in edge-mask order.

    ``start``/``stop`` restrict the masks to a half-open range so the space can be
    split between workers.
    """
    cap = get_settings().graph_enum_cap
    if n > cap:
        raise CapExceededError(f"labelled enumeration at n={n} exceeds cap {cap}")
    stop = labeled_graph_count(n) if stop is None else stop
    for mask in range(start, stop):
        yield labeled_graph(n, mask)


@lru_cache(maxsize=None)
def _trees_with_edges(k: int) -> Tuple[Tree, ...]:
    level: Dict[str, Tree] = {"()": Tree(1, ())}
    for _ in range(k):
        grown_level: Dict[str, Tree] = {}
        for tree in level.values():
            # one representative vertex per automorphism orbit
            orbit_codes = set()
            for v in range(tree.order):
                code = tree.rooted_code(v)
                if code in orbit_codes:
                    continue
                orbit_codes.add(code)
                grown = Tree(tree.order + 1, tree.edges + ((v, tree.order),))
                grown_level.setdefault(grown.canonical_code, grown)
        level = grown_level
    return tuple(level[code] for code in sorted(level))


def enumerate_trees(k: int) -> Iterator[Tree]:
    """One representative per isomorphism class of trees with exactly k edges."""
    cap = get_settings().tree_enum_cap
    if k < 0:
        raise PreconditionError("edge count must be non-negative")
    if k > cap:
        raise CapExceededError(f"tree enumeration at k={k} exceeds cap {cap}")
    yield from _trees_with_edges(k)
