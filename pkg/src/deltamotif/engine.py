"""Join-and-filter enumeration over a cached motif database.

The database maps each motif name to its embedding table in one data
graph.  ``M2`` is read straight off the edge list (both orientations); every
larger motif is enumerated by running the engine on its own template with
the motifs built so far, smallest first.

A query decomposes the pattern, starts from the first slice's table with
columns renamed to pattern vertex ids, then for each further slice joins on
the shared pattern vertices and drops rows that reuse a data vertex.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decompose import Decomposition, Slice, decompose
from .graph import Graph
from .motifs import Motif, MotifSet, custom_motif, motif_set as _motif_set
from .table import (
    EmbeddingTable,
    JoinConstraint,
    MemoryBudgetError,
    TableFormatError,
    inner_join,
    max_rows,
    read_binary,
    write_binary,
)
from .vf2 import check_mode

__all__ = [
    "MotifDatabase",
    "DatabaseError",
    "FingerprintMismatch",
    "MatchResult",
    "fingerprint",
    "edge_table",
    "build_database",
    "delta_motif",
    "execute",
    "save_database",
    "load_database",
    "count_matches",
]

MANIFEST = "manifest.json"
FORMAT_NAME = "deltamotif-db"
FORMAT_VERSION = 1


class DatabaseError(ValueError):
    """Unreadable or inconsistent database directory."""


class FingerprintMismatch(DatabaseError):
    """The stored database was built for a different data graph."""


def fingerprint(g: Graph) -> str:
    """Order-independent content hash: vertex count plus the sorted edge list."""
    h = hashlib.sha256()
    h.update(f"deltamotif-graph:{g.vertex_count}:{g.edge_count}:".encode())
    h.update(np.ascontiguousarray(g.edges, dtype="<i8").tobytes())
    return h.hexdigest()


def edge_table(g: Graph) -> EmbeddingTable:
    """Both orientations of every edge, as a two-column table."""
    e = g.edges
    return EmbeddingTable((0, 1), np.concatenate([e, e[:, ::-1]]))


@dataclass
class MotifDatabase:
    graph: Graph
    motifs: MotifSet
    entries: dict[str, EmbeddingTable]
    build_times: dict[str, float] = field(default_factory=dict)
    fingerprint: str = ""

    def __post_init__(self):
        if not self.fingerprint:
            self.fingerprint = fingerprint(self.graph)

    def __getitem__(self, name: str) -> EmbeddingTable:
        return self.entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    @property
    def prep_seconds(self) -> float:
        return float(sum(self.build_times.values()))

    def with_entries(self, entries: dict[str, EmbeddingTable]) -> MotifDatabase:
        return MotifDatabase(self.graph, self.motifs, entries, dict(self.build_times), self.fingerprint)


def build_database(data: Graph, motifs: MotifSet | str | list, budget: int | None = None) -> MotifDatabase:
    """Enumerate every motif of the set in ``data``, smallest first."""
    if not isinstance(motifs, MotifSet):
        motifs = _motif_set(motifs)
    t0 = time.perf_counter()
    entries = {"M2": edge_table(data)}
    times = {"M2": time.perf_counter() - t0}
    built = [motifs.get("M2")]
    for motif in sorted(motifs, key=lambda m: (m.size, m.name)):
        if motif.name == "M2":
            continue
        partial = MotifDatabase(data, MotifSet(built), entries, times)
        t0 = time.perf_counter()
        try:
            entries[motif.name] = delta_motif(motif.template, partial, budget=budget)
        except MemoryBudgetError as exc:
            raise MemoryBudgetError(exc.rows, exc.budget, f"while building {motif.name}") from exc
        times[motif.name] = time.perf_counter() - t0
        built.append(motif)
    return MotifDatabase(data, motifs, entries, times)


def _slice_table(db: MotifDatabase, s: Slice) -> EmbeddingTable:
    return db[s.motif_name].rename(list(s.assignment))


JoinHook = Callable[[int, Slice, EmbeddingTable], EmbeddingTable]


def execute(d: Decomposition, db: MotifDatabase, mode: str = "monomorphism", budget: int | None = None,
            on_join: JoinHook | None = None) -> EmbeddingTable:
    """Run the join-and-filter loop for a ready decomposition.

    ``on_join(i, slice, table)`` is called after slice ``i`` has been merged
    (including ``i == 0``) and may return a modified table.
    """
    mode = check_mode(mode)
    pattern = d.pattern
    k = pattern.vertex_count
    if budget is None:
        budget = max_rows()
    if not d.slices:
        result = EmbeddingTable([0], np.arange(db.graph.vertex_count).reshape(-1, 1))
    else:
        result = None
        for i, s in enumerate(d.slices):
            right = _slice_table(db, s)
            if result is None:
                result = right
            else:
                shared = [c.left_column for c in s.constraints]
                cons = [JoinConstraint(v, v) for v in shared]
                # join and duplicate filter in one pass over the wide left side
                result = inner_join(result, right, cons, budget=budget, distinct=True)
            if on_join is not None:
                result = on_join(i, s, result)
        result = result.select(range(k))
    if mode == "induced" and len(result):
        result = _induced_filter(result, pattern, db.graph)
    return result


def _induced_filter(t: EmbeddingTable, pattern: Graph, data: Graph) -> EmbeddingTable:
    k = pattern.vertex_count
    padj = pattern.neighbor_sets
    mask = np.ones(len(t), dtype=bool)
    for a in range(k):
        for b in range(a + 1, k):
            if b not in padj[a]:
                mask &= ~data.has_edges(t.values[:, a], t.values[:, b])
    return t if mask.all() else t.take(mask)


def delta_motif(pattern: Graph, db: MotifDatabase, mode: str = "monomorphism", budget: int | None = None) -> EmbeddingTable:
    """All matches of ``pattern`` in the database's data graph.

    Returns a table with one column per pattern vertex (row order unspecified).
    """
    return execute(decompose(pattern, db.motifs), db, mode, budget)


@dataclass(frozen=True)
class MatchResult:
    table: EmbeddingTable
    decomposition: Decomposition
    prep_seconds: float
    decompose_seconds: float
    join_seconds: float

    @property
    def count(self) -> int:
        return len(self.table)

    @property
    def compute_seconds(self) -> float:
        return self.decompose_seconds + self.join_seconds

    @property
    def total_seconds(self) -> float:
        return self.prep_seconds + self.compute_seconds

    def timings(self) -> dict[str, float]:
        return {
            "prep_seconds": self.prep_seconds,
            "decompose_seconds": self.decompose_seconds,
            "join_seconds": self.join_seconds,
            "compute_seconds": self.compute_seconds,
            "total_seconds": self.total_seconds,
        }


def count_matches(pattern: Graph, source: MotifDatabase | Graph, mode: str = "monomorphism",
                  motifs: MotifSet | str | None = None, budget: int | None = None) -> MatchResult:
    """Enumerate with a phase breakdown.

    ``source`` is either a prepared database (``prep_seconds`` is then 0) or
    a data graph, in which case the database for ``motifs`` is built first
    and timed as preparation.
    """
    if isinstance(source, MotifDatabase):
        db = source
        prep = 0.0
    else:
        t0 = time.perf_counter()
        db = build_database(source, motifs if motifs is not None else "M3,M2", budget)
        prep = time.perf_counter() - t0
    t0 = time.perf_counter()
    d = decompose(pattern, db.motifs)
    t1 = time.perf_counter()
    table = execute(d, db, mode, budget)
    t2 = time.perf_counter()
    return MatchResult(table, d, prep, t1 - t0, t2 - t1)


def _table_file(i: int, name: str) -> str:
    return f"{i:02d}_{re.sub(r'[^A-Za-z0-9_-]', '_', name)}.dmet"


def save_database(db: MotifDatabase, path) -> Path:
    """Write a manifest plus one binary table per motif into directory ``path``."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    listing = []
    for i, motif in enumerate(db.motifs):
        table = db.entries[motif.name]
        fname = _table_file(i, motif.name)
        write_binary(table, path / fname)
        listing.append({
            "name": motif.name,
            "template": {"vertices": motif.size, "edges": motif.template.edge_list()},
            "file": fname,
            "rows": len(table),
            "build_seconds": db.build_times.get(motif.name, 0.0),
        })
    manifest = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "fingerprint": db.fingerprint,
        "vertex_count": db.graph.vertex_count,
        "edge_count": db.graph.edge_count,
        "motifs": listing,
    }
    (path / MANIFEST).write_text(json.dumps(manifest, indent=2))
    return path


def load_database(path, data: Graph) -> MotifDatabase:
    """Load a saved database, refusing it if it was built for another graph."""
    path = Path(path)
    try:
        manifest = json.loads((path / MANIFEST).read_text())
    except FileNotFoundError as exc:
        raise DatabaseError(f"{path}: no {MANIFEST}") from exc
    except json.JSONDecodeError as exc:
        raise DatabaseError(f"{path}: corrupt manifest ({exc})") from exc
    if manifest.get("format") != FORMAT_NAME or manifest.get("version") != FORMAT_VERSION:
        raise DatabaseError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} directory")
    expected = fingerprint(data)
    if manifest["fingerprint"] != expected:
        raise FingerprintMismatch(
            f"{path}: built for graph {manifest['fingerprint'][:12]}..., given {expected[:12]}..."
        )
    motifs: list[Motif] = []
    entries = {}
    times = {}
    try:
        for item in manifest["motifs"]:
            tpl = item["template"]
            motif = custom_motif(item["name"], Graph(tpl["vertices"], [tuple(e) for e in tpl["edges"]]))
            table = read_binary(path / item["file"])
            if len(table) != item["rows"] or table.arity != motif.size:
                raise DatabaseError(f"{path / item['file']}: table shape does not match manifest")
            motifs.append(motif)
            entries[motif.name] = table
            times[motif.name] = float(item.get("build_seconds", 0.0))
    except (KeyError, TypeError, FileNotFoundError, TableFormatError) as exc:
        raise DatabaseError(f"{path}: corrupt database ({exc})") from exc
    return MotifDatabase(data, MotifSet(motifs), entries, times, expected)
