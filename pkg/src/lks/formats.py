"""
入出力フォーマット: graph6、木ファイル、JSONレポート。
Exchange formats: graph6 for hosts, the ``tree <order>`` edge-list file for guests,
and the deterministic JSON writer every report goes through.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import networkx as nx

from .errors import FormatError
from .graph_core import Graph, Tree, iter_bits

SCHEMA_VERSION = 1
GRAPH6_HEADER = ">>graph6<<"


# --- graph6 ---

def to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    return nxg


def from_networkx(nxg: nx.Graph) -> Graph:
    """Relabels nodes to 0..n-1 in sorted order."""
    index = {node: i for i, node in enumerate(sorted(nxg.nodes()))}
    return Graph.from_edges(len(index), ((index[u], index[v]) for u, v in nxg.edges()))


def graph_to_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(to_networkx(g), header=False).decode("ascii").strip()


def graph_from_graph6(text: str) -> Graph:
    line = text.strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):]
    if not line:
        raise FormatError("empty graph6 string")
    try:
        nxg = nx.from_graph6_bytes(line.encode("ascii"))
    except (nx.NetworkXError, ValueError, UnicodeEncodeError) as e:
        raise FormatError(f"malformed graph6 string {line!r}: {e}") from e
    return from_networkx(nxg)


def read_graph(source: Union[str, Path]) -> Graph:
    """Reads a host from a graph6 file (first non-empty line) or an inline graph6 string."""
    path = Path(source)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False
    if not is_file:
        return graph_from_graph6(str(source))
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            return graph_from_graph6(line)
    raise FormatError(f"no graph6 line in {path}")


# --- 木ファイル / Tree files ---

_TREE_HEADER = re.compile(r"^tree\s+(\d+)$")


def tree_to_text(t: Tree) -> str:
    lines = [f"tree {t.order}"]
    lines.extend(f"{u} {v}" for u, v in t.edges)
    return "\n".join(lines) + "\n"


def tree_from_text(text: str) -> Tree:
    """Parses ``tree <order>`` followed by whitespace-separated vertex pairs."""
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]
    if not lines:
        raise FormatError("empty tree file")
    header = _TREE_HEADER.match(lines[0])
    if not header:
        raise FormatError(f"expected 'tree <order>' header, got {lines[0]!r}")
    order = int(header.group(1))
    tokens = " ".join(lines[1:]).split()
    if len(tokens) % 2:
        raise FormatError("odd number of endpoint tokens in tree edge list")
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as e:
        raise FormatError(f"non-integer vertex in tree edge list: {e}") from e
    edges = tuple(zip(values[0::2], values[1::2]))
    try:
        return Tree(order, edges)
    except ValueError as e:
        raise FormatError(f"tree file does not describe a tree: {e}") from e


def read_tree(path: Union[str, Path]) -> Tree:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read tree file {path}: {e}") from e
    return tree_from_text(text)


# --- JSON ---

def vertex_list(vertices: Union[int, Iterable[int]]) -> List[int]:
    """Sorted vertex list from a bitset or a collection."""
    if isinstance(vertices, int):
        return list(iter_bits(vertices))
    return sorted(vertices)


def dumps_report(payload: Dict[str, Any]) -> str:
    document = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_report(payload: Dict[str, Any], output_path: Path) -> Path:
    """Writes a report deterministically; identical payloads give identical bytes."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(dumps_report(payload))
    return output_path
