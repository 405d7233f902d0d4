"""Greedy decomposition of a pattern graph into motif slices.

Each iteration tries the motifs from largest to smallest.  For the first
motif that has an acceptable occurrence in the current reduced pattern, the
occurrence sharing the most vertices with earlier slices wins (the earliest
matcher hit on ties).  Acceptable means it covers at least one uncovered
pattern edge and, after the first slice, touches a vertex already used.
Occurrences are enumerated once per motif on the full pattern and masked
per iteration.
More shared vertices mean more join keys and smaller intermediate tables.

The reduced pattern is the subgraph induced on the vertices that still
have an uncovered incident edge.
``M2`` always finds an uncovered edge next to the covered part of a
connected pattern, so the loop ends after at most ``|E_p|`` slices.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .motifs import Motif, MotifSet, custom_motif
from .table import JoinConstraint
from .vf2 import vf2_iter

__all__ = ["Slice", "Decomposition", "DecompositionError", "ValidationReport", "decompose", "validate"]


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Slice:
    """One motif occurrence inside the pattern.

    ``assignment[slot]`` is the pattern vertex playing motif slot ``slot``.
    Each constraint ties a pattern vertex already present in earlier slices
    (``left_column``) to the motif slot that reuses it (``right_column``).
    """

    motif: Motif
    assignment: tuple[int, ...]
    constraints: tuple[JoinConstraint, ...]
    new_edges: tuple[tuple[int, int], ...]

    @property
    def motif_name(self) -> str:
        return self.motif.name

    def edge_images(self) -> list[tuple[int, int]]:
        a = self.assignment
        return [tuple(sorted((a[s], a[t]))) for s, t in self.motif.template.edges.tolist()]


@dataclass(frozen=True)
class Decomposition:
    pattern: Graph
    slices: tuple[Slice, ...]
    covered_edges: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.slices)

    @property
    def join_count(self) -> int:
        return max(len(self.slices) - 1, 0)

    def motif_names(self) -> list[str]:
        return [s.motif_name for s in self.slices]

    def to_dict(self) -> dict:
        motifs = {}
        for s in self.slices:
            motifs[s.motif_name] = s.motif.template.edge_list()
        return {
            "pattern": {"vertices": self.pattern.vertex_count, "edges": self.pattern.edge_list()},
            "motifs": motifs,
            "slices": [
                {
                    "motif": s.motif_name,
                    "assignment": list(s.assignment),
                    "constraints": [[c.left_column, c.right_column] for c in s.constraints],
                    "new_edges": [list(e) for e in s.new_edges],
                }
                for s in self.slices
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> Decomposition:
        pattern = Graph(d["pattern"]["vertices"], [tuple(e) for e in d["pattern"]["edges"]])
        templates = {}
        for name, edges in d["motifs"].items():
            size = 1 + max(max(e) for e in edges)
            templates[name] = custom_motif(name, Graph(size, [tuple(e) for e in edges]))
        slices = []
        covered = set()
        for s in d["slices"]:
            new = tuple(tuple(e) for e in s["new_edges"])
            covered.update(new)
            slices.append(Slice(
                templates[s["motif"]],
                tuple(s["assignment"]),
                tuple(JoinConstraint(a, b) for a, b in s["constraints"]),
                new,
            ))
        return cls(pattern, tuple(slices), frozenset(covered))

    @classmethod
    def from_json(cls, text: str) -> Decomposition:
        return cls.from_dict(json.loads(text))


def _motif_list(motifs: MotifSet | Iterable[Motif]) -> list[Motif]:
    if isinstance(motifs, MotifSet):
        return list(motifs)
    ms = list(motifs)
    if "M2" not in {m.name for m in ms}:
        raise DecompositionError("motif set must contain M2")
    return sorted(ms, key=lambda m: (-m.size, m.name))


def _occurrences(motif: Motif, pattern: Graph, edge_id: dict) -> tuple[np.ndarray, np.ndarray]:
    """All matches of ``motif`` in ``pattern`` plus the pattern-edge ids each one uses."""
    tpl = motif.template
    if tpl.vertex_count > pattern.vertex_count or tpl.edge_count > pattern.edge_count:
        return np.empty((0, tpl.vertex_count), np.int64), np.empty((0, tpl.edge_count), np.int64)
    occ = np.array(list(vf2_iter(tpl, pattern, "monomorphism")), dtype=np.int64).reshape(-1, tpl.vertex_count)
    te = tpl.edges
    a, b = occ[:, te[:, 0]], occ[:, te[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    eids = np.vectorize(lambda u, v: edge_id[(u, v)], otypes=[np.int64])(lo, hi) if occ.size else lo
    return occ, eids.reshape(len(occ), tpl.edge_count)


def decompose(pattern: Graph, motifs: MotifSet | Iterable[Motif]) -> Decomposition:
    """Split ``pattern`` into an ordered list of motif slices."""
    motifs = _motif_list(motifs)
    if pattern.vertex_count == 0:
        raise DecompositionError("pattern is empty")
    if not pattern.is_connected():
        raise DecompositionError("pattern is disconnected")

    edges = pattern.edge_list()
    edge_id = {e: i for i, e in enumerate(edges)}
    # occurrences in the reduced pattern are exactly the occurrences in the
    # full pattern whose vertices are all still alive
    table = [(m, *_occurrences(m, pattern, edge_id)) for m in motifs]
    covered = np.zeros(len(edges), dtype=bool)
    uncovered_deg = pattern.degree().copy()
    used = np.zeros(pattern.vertex_count, dtype=bool)
    slices: list[Slice] = []

    while not covered.all():
        alive = uncovered_deg > 0
        accepted = None
        for motif, occ, eids in table:
            if not len(occ):
                continue
            ok = alive[occ].all(axis=1) & (~covered[eids]).any(axis=1)
            overlap = used[occ].sum(axis=1)
            if slices:
                ok &= overlap > 0
            if not ok.any():
                continue
            best = int(np.argmax(np.where(ok, overlap, -1)))
            accepted = (motif, occ[best], eids[best])
            break
        if accepted is None:  # unreachable for connected patterns when M2 is present
            raise DecompositionError("no motif matches the remaining pattern")
        motif, occ_row, eid_row = accepted
        assignment = tuple(int(v) for v in occ_row)
        new_ids = sorted({int(e) for e in eid_row if not covered[e]})
        new = tuple(edges[e] for e in new_ids)
        constraints = tuple(JoinConstraint(v, slot) for slot, v in enumerate(assignment) if used[v])
        slices.append(Slice(motif, assignment, constraints, new))
        for e in new_ids:
            covered[e] = True
            u, v = edges[e]
            uncovered_deg[u] -= 1
            uncovered_deg[v] -= 1
        used[list(assignment)] = True
    return Decomposition(pattern, tuple(slices), frozenset(edges))


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(d: Decomposition, pattern: Graph | None = None) -> ValidationReport:
    """Check coverage, edge preservation and constraint consistency."""
    pattern = d.pattern if pattern is None else pattern
    problems = []
    pedges = {tuple(e) for e in pattern.edges.tolist()}
    seen_vertices: set[int] = set()
    images_union: set[tuple[int, int]] = set()
    for i, s in enumerate(d.slices):
        a = s.assignment
        if len(a) != s.motif.size:
            problems.append(f"slice {i}: assignment has {len(a)} entries for a motif of size {s.motif.size}")
            continue
        if len(set(a)) != len(a):
            problems.append(f"slice {i}: assignment {a} is not injective")
        if any(v < 0 or v >= pattern.vertex_count for v in a):
            problems.append(f"slice {i}: assignment {a} leaves the pattern")
            continue
        for e in s.edge_images():
            if e not in pedges:
                problems.append(f"slice {i}: motif edge maps to non-edge {e}")
        images_union.update(s.edge_images())
        shared = seen_vertices.intersection(a)
        if i > 0 and not s.constraints:
            problems.append(f"slice {i}: no join constraint")
        for c in s.constraints:
            if not 0 <= c.right_column < len(a):
                problems.append(f"slice {i}: constraint slot {c.right_column} out of range")
            elif c.left_column not in seen_vertices:
                problems.append(f"slice {i}: constraint on vertex {c.left_column} not present in earlier slices")
            elif a[c.right_column] != c.left_column:
                problems.append(f"slice {i}: constraint {c.left_column}={c.right_column} disagrees with assignment")
        constrained = {c.left_column for c in s.constraints}
        for v in sorted(shared - constrained):
            problems.append(f"slice {i}: shared vertex {v} has no constraint")
        seen_vertices.update(a)
    missing = pedges - images_union
    if missing:
        problems.append(f"edges not covered: {sorted(missing)}")
    if pattern.edge_count and len(seen_vertices) != pattern.vertex_count:
        problems.append(f"vertices not covered: {sorted(set(range(pattern.vertex_count)) - seen_vertices)}")
    return ValidationReport(problems)
