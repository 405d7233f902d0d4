"""Fidelity-weighted layout selection.

A layout is one row of the pattern's embedding table: logical qubit ``u``
(pattern vertex) sits on physical qubit ``row[u]``.  Its score is the
product of the node fidelities of the used qubits and the edge fidelities of
the couplings that carry pattern edges.

Scores are attached to every motif table once, then multiplied through the
joins.  Two slices that share vertices (and possibly edges) would count
those factors twice, so each join divides them back out; the final score is
therefore the canonical product regardless of motif set or join order.

Device file format::

    nodes 3
    node 0 0.99
    node 1 0.98
    node 2 0.97
    edge 0 1 0.95
    edge 1 2 0.96
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decompose import decompose
from .engine import MotifDatabase, execute, fingerprint
from .graph import Graph, ParseError
from .table import EmbeddingTable, write_csv

__all__ = [
    "DeviceModel",
    "ScoredLayouts",
    "attach_scores",
    "select_layouts",
    "layout_scores",
    "load_device",
    "write_device",
    "random_device",
]


RANK_DECIMALS = 12


class DeviceModel:
    """Coupling graph with per-qubit and per-coupling fidelities in (0, 1]."""

    def __init__(self, coupling: Graph, node_fidelity, edge_fidelity):
        node = np.asarray(node_fidelity, dtype=np.float64)
        if isinstance(edge_fidelity, dict):
            lookup = {tuple(sorted(k)): float(v) for k, v in edge_fidelity.items()}
            missing = [e for e in coupling.edge_list() if e not in lookup]
            if missing:
                raise ValueError(f"no fidelity for coupling {missing[0]}")
            edge = np.array([lookup[e] for e in coupling.edge_list()], dtype=np.float64)
        else:
            edge = np.asarray(edge_fidelity, dtype=np.float64)
        if node.shape != (coupling.vertex_count,):
            raise ValueError(f"expected {coupling.vertex_count} node fidelities, got {node.shape}")
        if edge.shape != (coupling.edge_count,):
            raise ValueError(f"expected {coupling.edge_count} edge fidelities, got {edge.shape}")
        for what, arr in (("node", node), ("edge", edge)):
            bad = ~((arr > 0) & (arr <= 1))
            if bad.any():
                raise ValueError(f"{what} fidelity {arr[bad][0]} outside (0, 1]")
        self.coupling = coupling
        self.node_fidelity = node
        self.edge_fidelity = edge
        n = max(coupling.vertex_count, 1)
        e = coupling.edges
        self._keys = e[:, 0] * n + e[:, 1]  # sorted because edges are

    def node_f(self, v) -> np.ndarray:
        return self.node_fidelity[np.asarray(v, dtype=np.int64)]

    def edge_f(self, u, v) -> np.ndarray:
        """Fidelity of couplings ``(u[i], v[i])``; raises if one is absent."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        q = np.minimum(u, v) * max(self.coupling.vertex_count, 1) + np.maximum(u, v)
        pos = np.searchsorted(self._keys, q)
        pos = np.minimum(pos, max(len(self._keys) - 1, 0))
        if len(self._keys) == 0 or not np.array_equal(self._keys[pos], q):
            raise KeyError("layout uses a pair of qubits without a coupling")
        return self.edge_fidelity[pos]

    def with_edge_fidelity(self, u: int, v: int, value: float) -> DeviceModel:
        edge = self.edge_fidelity.copy()
        edge[int(np.searchsorted(self._keys, min(u, v) * max(self.coupling.vertex_count, 1) + max(u, v)))] = value
        return DeviceModel(self.coupling, self.node_fidelity, edge)


def layout_scores(values: np.ndarray, pattern_edges, device: DeviceModel) -> np.ndarray:
    """Canonical score of each row: node fidelities times edge fidelities."""
    values = np.asarray(values)
    score = np.prod(device.node_fidelity[values], axis=1) if values.size else np.ones(len(values))
    for a, b in pattern_edges:
        score = score * device.edge_f(values[:, a], values[:, b])
    return score


def attach_scores(db: MotifDatabase, device: DeviceModel) -> MotifDatabase:
    """Give every motif table a score column for ``device``."""
    if db.fingerprint != fingerprint(device.coupling):
        raise ValueError("database was not built over the device coupling graph")
    entries = {}
    for motif in db.motifs:
        t = db[motif.name]
        entries[motif.name] = t.with_score(layout_scores(t.values, motif.template.edges.tolist(), device))
    return db.with_entries(entries)


@dataclass
class ScoredLayouts:
    table: EmbeddingTable
    ranking: np.ndarray
    top_k: int
    timings: dict = field(default_factory=dict)

    def top(self, k: int | None = None) -> EmbeddingTable:
        k = self.top_k if k is None else k
        return self.table.take(self.ranking[:k])

    def write_csv(self, path) -> None:
        write_csv(self.top(), path)

    def write_timings(self, path) -> None:
        Path(path).write_text(json.dumps(self.timings, indent=2))


def select_layouts(pattern: Graph, db: MotifDatabase, device: DeviceModel, top_k: int,
                   mode: str = "monomorphism", budget: int | None = None) -> ScoredLayouts:
    """Enumerate and score layouts of ``pattern``; rank best first.

    Ties are broken by lexicographic row order.  Scores that agree to
    ``RANK_DECIMALS`` places count as tied, since automorphic layouts reach
    the same product in a different multiplication order.
    """
    if top_k <= 0:
        raise ValueError("top_k must be positive")
    if any(db[m.name].score is None for m in db.motifs):
        raise ValueError("database has no scores; call attach_scores first")
    t_start = time.perf_counter()
    d = decompose(pattern, db.motifs)
    t_dec = time.perf_counter()
    scoring = 0.0

    def fix_double_counts(i, s, t):
        nonlocal scoring
        if i == 0:
            return t
        t0 = time.perf_counter()
        score = t.score.copy()
        for c in s.constraints:
            score /= device.node_f(t.column(c.left_column))
        new = set(s.new_edges)
        for a, b in s.edge_images():
            if (a, b) not in new:
                score /= device.edge_f(t.column(a), t.column(b))
        scoring += time.perf_counter() - t0
        return t.with_score(score)

    table = execute(d, db, mode, budget, on_join=fix_double_counts)
    t_gen = time.perf_counter()
    if not d.slices:
        table = table.with_score(device.node_f(table.values[:, 0]))
    keys = [table.values[:, j] for j in reversed(range(table.arity))]
    ranking = np.lexsort(keys + [-np.round(table.score, RANK_DECIMALS)]) if len(table) else np.empty(0, np.int64)
    t_rank = time.perf_counter()
    scoring += t_rank - t_gen
    timings = {
        "generation_seconds": (t_gen - t_dec) - (scoring - (t_rank - t_gen)),
        "scoring_seconds": scoring,
        "other_seconds": t_dec - t_start,
    }
    return ScoredLayouts(table, ranking, top_k, timings)


def load_device(path) -> DeviceModel:
    path = Path(path)
    n = None
    nodes: dict[int, float] = {}
    edges: dict[tuple[int, int], float] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "nodes" and len(parts) == 2:
                    n = int(parts[1])
                elif parts[0] == "node" and len(parts) == 3:
                    v, f = int(parts[1]), float(parts[2])
                    if v in nodes:
                        raise ParseError(f"duplicate node {v}", lineno, path)
                    nodes[v] = f
                elif parts[0] == "edge" and len(parts) == 4:
                    u, v, f = int(parts[1]), int(parts[2]), float(parts[3])
                    key = (min(u, v), max(u, v))
                    if key in edges:
                        raise ParseError(f"duplicate edge {key}", lineno, path)
                    edges[key] = f
                else:
                    raise ParseError(f"unrecognised line {line!r}", lineno, path)
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(f"bad number in {line!r}", lineno, path) from exc
            if parts[0] in ("node", "edge") and not 0 < float(parts[-1]) <= 1:
                raise ParseError(f"fidelity {parts[-1]} outside (0, 1]", lineno, path)
    if n is None:
        raise ParseError("missing 'nodes N' header", None, path)
    coupled = {v for e in edges for v in e}
    out_of_range = [v for v in set(nodes) | coupled if not 0 <= v < n]
    if out_of_range:
        raise ParseError(f"qubit {out_of_range[0]} outside 0..{n - 1}", None, path)
    missing = [v for v in range(n) if v not in nodes]
    if missing:
        raise ParseError(f"no node fidelity for qubit {missing[0]}", None, path)
    coupling = Graph(n, list(edges))
    return DeviceModel(coupling, [nodes[v] for v in range(n)], edges)


def write_device(device: DeviceModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"nodes {device.coupling.vertex_count}\n")
        for v, f in enumerate(device.node_fidelity.tolist()):
            fh.write(f"node {v} {f!r}\n")
        for (u, v), f in zip(device.coupling.edge_list(), device.edge_fidelity.tolist()):
            fh.write(f"edge {u} {v} {f!r}\n")


def random_device(coupling: Graph, seed=None, low: float = 0.9, high: float = 1.0) -> DeviceModel:
    """Device with fidelities drawn uniformly from ``(low, high]``."""
    rng = np.random.default_rng(seed)
    node = high - (high - low) * rng.random(coupling.vertex_count)
    edge = high - (high - low) * rng.random(coupling.edge_count)
    return DeviceModel(coupling, node, edge)
