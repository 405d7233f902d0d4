"""Undirected simple graphs, lattice generators and file readers.

Vertices are dense integers ``0..vertex_count-1``.  Edges are stored once,
as ``(u, v)`` with ``u < v``, in a lexicographically sorted ``(m, 2)`` array.
Graphs are immutable after construction.

Heavy-hex construction
----------------------
:func:`heavy_hex` starts from a brick-wall honeycomb of ``rows x cols``
hexagonal cells and inserts one degree-2 vertex on every honeycomb edge.
The honeycomb uses column-major coordinates ``(i, j)`` with
``i in 0..cols`` and ``j in 0..2*rows+1``; vertical links join ``(i, j)`` to
``(i, j+1)`` and horizontal links join ``(i, j)`` to ``(i+1, j)`` whenever
``i`` and ``j`` have the same parity.  The two dangling corners
``(0, 2*rows+1)`` and ``(cols, (2*rows+1)*(cols % 2))`` are dropped.  A
single cell therefore has 6 corner vertices and 6 inserted vertices::

        o---x---o
        |       |
        x       x
        |       |
        o       o
        |       |
        x       x
        |       |
        o---x---o

(``o`` corner of degree <= 3, ``x`` inserted vertex of degree 2).

The honeycomb has ``(2r+2)(c+1) - 2`` vertices and
``(c+1)(2r+1) + c(r+1) - 2`` edges, so the heavy-hex lattice has their sum.
"""

from __future__ import annotations

import re
import warnings
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "SampledPattern",
    "make_graph",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "square_grid",
    "heavy_hex",
    "heavy_hex_size",
    "heavy_hex_preset",
    "closest_heavy_hex",
    "HEAVY_HEX_PRESETS",
    "erdos_renyi",
    "random_connected_subgraph",
    "load_graph",
    "write_edge_list",
]


class GraphError(ValueError):
    """Raised for invalid graph construction or sampling requests."""


class ParseError(ValueError):
    """Malformed graph file.  ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class Graph:
    """Immutable undirected simple graph on dense integer vertices.

    Parameters
    ----------
    vertex_count : int
        Number of vertices.
    edges : array-like of shape (m, 2)
        Undirected edges. Reversed duplicates are collapsed.
    labels : sequence of str, optional
        External vertex names, one per vertex (sidecar label table).
    """

    __slots__ = ("_n", "_edges", "_adj", "_adjsets", "_keys", "labels")

    def __init__(self, vertex_count: int, edges=(), labels: Sequence[str] | None = None):
        n = int(vertex_count)
        if n < 0:
            raise GraphError(f"vertex_count must be non-negative, got {n}")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2) if len(edges) else np.empty((0, 2), np.int64)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                bad = arr[(arr < 0).any(axis=1) | (arr >= n).any(axis=1)][0]
                raise GraphError(f"edge endpoint out of range: ({bad[0]}, {bad[1]}) with vertex_count={n}")
            loops = arr[:, 0] == arr[:, 1]
            if loops.any():
                v = int(arr[loops][0, 0])
                raise GraphError(f"self-loop on vertex {v} is not allowed")
            arr = np.sort(arr, axis=1)
            arr = np.unique(arr, axis=0)
        self._n = n
        self._edges = arr
        self._edges.setflags(write=False)
        self._adj = None
        self._adjsets = None
        self._keys = None
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise GraphError(f"expected {n} labels, got {len(labels)}")
        self.labels = labels

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> np.ndarray:
        """Read-only ``(m, 2)`` array of edges with ``u < v``, sorted."""
        return self._edges

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self._edges]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbour tuples, one per vertex."""
        if self._adj is None:
            nbrs: list[list[int]] = [[] for _ in range(self._n)]
            for u, v in self._edges.tolist():
                nbrs[u].append(v)
                nbrs[v].append(u)
            self._adj = tuple(tuple(sorted(a)) for a in nbrs)
        return self._adj

    @property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        if self._adjsets is None:
            self._adjsets = tuple(frozenset(a) for a in self.adjacency)
        return self._adjsets

    def degree(self, v: int | None = None):
        if v is None:
            return np.array([len(a) for a in self.adjacency], dtype=np.int64)
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return int(self.degree().max()) if self._n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edge_keys(self) -> np.ndarray:
        """Sorted int64 codes ``u * n + v`` of both orientations of every edge."""
        if self._keys is None:
            e = self._edges
            n = np.int64(max(self._n, 1))
            keys = np.concatenate([e[:, 0] * n + e[:, 1], e[:, 1] * n + e[:, 0]])
            keys.sort()
            keys.setflags(write=False)
            self._keys = keys
        return self._keys

    def has_edges(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Vectorised edge test for equal-length id arrays."""
        keys = self.edge_keys()
        q = np.asarray(u, dtype=np.int64) * max(self._n, 1) + np.asarray(v, dtype=np.int64)
        if len(keys) == 0:
            return np.zeros(q.shape, dtype=bool)
        pos = np.searchsorted(keys, q)
        pos = np.minimum(pos, len(keys) - 1)
        return keys[pos] == q

    def is_connected(self) -> bool:
        if self._n == 0:
            return True
        return len(self.component(0)) == self._n

    def component(self, start: int) -> list[int]:
        """Vertices reachable from ``start`` in BFS order."""
        adj = self.adjacency
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order

    def subgraph(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph; vertex ``vertices[i]`` becomes ``i``."""
        index = {int(v): i for i, v in enumerate(vertices)}
        sub = [
            (index[u], index[v])
            for u, v in self._edges.tolist()
            if u in index and v in index
        ]
        return Graph(len(index), sub)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self) -> int:
        return hash((self._n, self._edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self._n}, edge_count={self.edge_count})"


def make_graph(vertex_count: int, edges: Iterable[tuple[int, int]] = ()) -> Graph:
    """Build a :class:`Graph`, deduplicating reversed pairs.

    >>> make_graph(2, [(0, 1), (1, 0)]).edge_count
    1
    """
    return Graph(vertex_count, list(edges))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def square_grid(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``r * cols + c`` sits at row r, column c."""
    if rows < 1 or cols < 1:
        raise GraphError("rows and cols must be >= 1")
    idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    horizontal = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1)
    vertical = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1)
    return Graph(rows * cols, np.concatenate([horizontal, vertical]))


def _honeycomb(rows: int, cols: int) -> tuple[list[tuple[int, int]], list[tuple[tuple[int, int], tuple[int, int]]]]:
    top = 2 * rows + 1
    links = []
    for i in range(cols + 1):
        for j in range(top):
            links.append(((i, j), (i, j + 1)))
    for i in range(cols):
        for j in range(top + 1):
            if i % 2 == j % 2:
                links.append(((i, j), (i + 1, j)))
    dropped = {(0, top), (cols, top * (cols % 2))}
    links = [(a, b) for a, b in links if a not in dropped and b not in dropped]
    nodes = sorted({p for link in links for p in link})
    return nodes, links


def heavy_hex(rows: int, cols: int) -> Graph:
    """Heavy-hex lattice of ``rows x cols`` hexagonal cells (max degree 3).

    Honeycomb corners are numbered first (sorted by column, then row),
    followed by one inserted vertex per honeycomb link in link order.
    """
    if rows < 1 or cols < 1:
        raise GraphError("rows and cols must be >= 1")
    nodes, links = _honeycomb(rows, cols)
    index = {p: k for k, p in enumerate(nodes)}
    edges = []
    nxt = len(nodes)
    for a, b in links:
        edges.append((index[a], nxt))
        edges.append((nxt, index[b]))
        nxt += 1
    return Graph(nxt, edges)


def heavy_hex_size(rows: int, cols: int) -> int:
    """Vertex count of ``heavy_hex(rows, cols)`` without building it."""
    corners = (2 * rows + 2) * (cols + 1) - 2
    links = (cols + 1) * (2 * rows + 1) + cols * (rows + 1) - 2
    return corners + links


def closest_heavy_hex(target: int) -> tuple[int, int]:
    """``(rows, cols)`` whose heavy-hex size is nearest ``target``, preferring square shapes."""
    best = None
    for r in range(1, 200):
        for c in range(1, 200):
            size = heavy_hex_size(r, c)
            key = (abs(size - target), abs(r - c), r, c)
            if best is None or key < best:
                best = key
    return best[2], best[3]


# Nearest near-square parameterisations to the 1990 and 4485 vertex devices.
HEAVY_HEX_PRESETS: dict[str, tuple[int, int]] = {
    "hh1990": closest_heavy_hex(1990),
    "hh4485": closest_heavy_hex(4485),
}


def heavy_hex_preset(name: str) -> Graph:
    try:
        rows, cols = HEAVY_HEX_PRESETS[name]
    except KeyError:
        raise GraphError(f"unknown heavy-hex preset {name!r}; choose from {sorted(HEAVY_HEX_PRESETS)}") from None
    return heavy_hex(rows, cols)


def erdos_renyi(n: int, p: float, seed=None) -> Graph:
    """G(n, p) random graph."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1))


@dataclass(frozen=True)
class SampledPattern:
    """A sampled pattern and its witness embedding into the source graph."""

    graph: Graph
    witness: np.ndarray  # witness[i] is the source vertex of pattern vertex i


def random_connected_subgraph(g: Graph, size: int, seed=None, method: str = "frontier") -> SampledPattern:
    """Sample a connected induced subgraph with exactly ``size`` vertices.

    Both methods start at a uniformly chosen vertex and use
    ``numpy.random.default_rng(seed)``, so seeds reproduce across platforms.

    ``"frontier"``
        Repeatedly pick a uniformly random edge leaving the collected set and
        add its outer endpoint.  Produces compact patterns.
    ``"walk"``
        Random walk; each vertex is collected on its first visit.  Tends to
        leave long dangling chains with very many embeddings.

    All edges of ``g`` among the collected vertices are kept.  Pattern
    vertex ``i`` is the ``i``-th collected vertex.
    """
    if size < 1 or size > g.vertex_count:
        raise GraphError(f"cannot sample {size} vertices from a graph with {g.vertex_count}")
    if method not in ("frontier", "walk"):
        raise ValueError(f"unknown sampling method {method!r}")
    rng = np.random.default_rng(seed)
    start = int(rng.integers(g.vertex_count))
    if len(g.component(start)) < size:
        raise GraphError(f"component of vertex {start} has fewer than {size} vertices")
    adj = g.adjacency
    order = [start]
    seen = {start}
    if method == "walk":
        cur = start
        while len(order) < size:
            nbrs = adj[cur]
            cur = nbrs[int(rng.integers(len(nbrs)))]
            if cur not in seen:
                seen.add(cur)
                order.append(cur)
    else:
        frontier = [w for w in adj[start]]
        while len(order) < size:
            i = int(rng.integers(len(frontier)))
            w = frontier[i]
            frontier[i] = frontier[-1]
            frontier.pop()
            if w in seen:
                continue
            seen.add(w)
            order.append(w)
            frontier.extend(x for x in adj[w] if x not in seen)
    witness = np.asarray(order, dtype=np.int64)
    return SampledPattern(g.subgraph(order), witness)


_MM_HEADER = re.compile(r"%%MatrixMarket\s+matrix\s+coordinate\s+(\w+)\s+(\w+)", re.IGNORECASE)


_VERTICES_DIRECTIVE = re.compile(r"#\s*vertices\s+(\d+)\s*$")


def _read_edge_list(path: Path) -> tuple[Graph, int]:
    pairs: list[tuple[str, str]] = []
    declared = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            directive = _VERTICES_DIRECTIVE.match(raw.strip())
            if directive:
                declared = int(directive.group(1))
                continue
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {line!r}", lineno, path)
            pairs.append((parts[0], parts[1]))
    loops = sum(a == b for a, b in pairs)
    tokens = {t for p in pairs for t in p}
    if all(t.isdigit() for t in tokens):
        edges = [(int(a), int(b)) for a, b in pairs if a != b]
        n = max([declared] + [max(e) + 1 for e in edges] + [int(t) + 1 for t in tokens])
        return Graph(n, edges), loops
    labels = sorted(tokens)
    index = {t: i for i, t in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in pairs if a != b]
    return Graph(len(labels), edges, labels=labels), loops


def read_matrix_market(path) -> tuple[Graph, int]:
    """Read a MatrixMarket coordinate file.

    Returns the graph and the number of diagonal entries that were dropped.
    Values are ignored; ``general`` matrices are symmetrised.
    """
    path = Path(path)
    with open(path) as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", 1, path)
    m = _MM_HEADER.match(lines[0].strip())
    if not m:
        raise ParseError("missing '%%MatrixMarket matrix coordinate' header", 1, path)
    field, symmetry = m.group(1).lower(), m.group(2).lower()
    if field not in ("pattern", "real", "integer", "complex"):
        raise ParseError(f"unsupported field {field!r}", 1, path)
    if symmetry not in ("symmetric", "general"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1, path)
    size = None
    edges = []
    diagonal = 0
    for lineno, line in enumerate(lines[1:], 2):
        text = line.strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if size is None:
            if len(parts) != 3 or not all(p.isdigit() for p in parts):
                raise ParseError(f"bad size line {text!r}", lineno, path)
            nrows, ncols, _ = (int(p) for p in parts)
            if nrows != ncols:
                raise ParseError(f"matrix is not square ({nrows} x {ncols})", lineno, path)
            size = nrows
            continue
        if len(parts) < 2 or not parts[0].isdigit() or not parts[1].isdigit():
            raise ParseError(f"bad entry {text!r}", lineno, path)
        i, j = int(parts[0]) - 1, int(parts[1]) - 1
        if not (0 <= i < size and 0 <= j < size):
            raise ParseError(f"entry ({i + 1}, {j + 1}) outside {size} x {size}", lineno, path)
        if i == j:
            diagonal += 1
            continue
        edges.append((i, j))
    if size is None:
        raise ParseError("missing size line", len(lines), path)
    return Graph(size, edges), diagonal


def load_graph(path, format: str | None = None) -> Graph:
    """Load an edge-list (``.txt``/``.el``/``.edges``) or MatrixMarket (``.mtx``) file.

    Diagonal MatrixMarket entries and edge-list self-loops are dropped with
    a :class:`UserWarning` that reports how many were skipped.
    """
    path = Path(path)
    if format is None:
        format = "matrix-market" if path.suffix.lower() == ".mtx" else "edge-list"
    if format == "matrix-market":
        g, diagonal = read_matrix_market(path)
        if diagonal:
            warnings.warn(f"{path}: dropped {diagonal} diagonal entries", UserWarning, stacklevel=2)
        return g
    if format == "edge-list":
        g, loops = _read_edge_list(path)
        if loops:
            warnings.warn(f"{path}: dropped {loops} self-loops", UserWarning, stacklevel=2)
        return g
    raise ValueError(f"unknown graph format {format!r}")


def write_edge_list(g: Graph, path, header: str | None = None) -> None:
    with open(path, "w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"# vertices {g.vertex_count}\n")
        for u, v in g.edges.tolist():
            fh.write(f"{u} {v}\n")
