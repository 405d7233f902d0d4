"""Motif vocabulary.

Naming: ``M<k>`` is a path on k vertices, ``M<k>-O`` a k-cycle.  Branched
variants carry extra suffixes and use these fixed templates:

``M4-1``
    path ``0-1-2`` with one branch ``1-3`` (a 3-leaf star)::

        0 - 1 - 2
            |
            3

``M6-2O``
    two 4-cycles sharing an edge (a 2 x 3 block of the square grid)::

        0 - 1 - 2
        |   |   |
        3 - 4 - 5

``M18-O-6``
    a 12-cycle ``0..11`` with a pendant vertex on every even cycle vertex
    (``12 + i//2`` hangs off vertex ``i``), i.e. one heavy-hex cell together
    with the six links leaving its corners.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .graph import Graph, cycle_graph, path_graph

__all__ = [
    "Motif",
    "MotifSet",
    "MotifError",
    "builtin_motif",
    "catalog_names",
    "custom_motif",
    "default_motif_set",
    "motif_set",
]


class MotifError(ValueError):
    pass


@dataclass(frozen=True)
class Motif:
    name: str
    template: Graph

    @property
    def size(self) -> int:
        return self.template.vertex_count

    def __repr__(self) -> str:
        return f"Motif({self.name!r}, size={self.size}, edges={self.template.edge_count})"


def _star_branch() -> Graph:
    return Graph(4, [(0, 1), (1, 2), (1, 3)])


def _domino() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])


def _hex_cell_with_legs() -> Graph:
    edges = [(i, (i + 1) % 12) for i in range(12)]
    edges += [(i, 12 + i // 2) for i in range(0, 12, 2)]
    return Graph(18, edges)


_BUILDERS = {f"M{k}": (lambda k=k: path_graph(k)) for k in range(2, 10)}
_BUILDERS.update({f"M{k}-O": (lambda k=k: cycle_graph(k)) for k in (3, 4, 5, 6, 8, 12)})
_BUILDERS["M4-1"] = _star_branch
_BUILDERS["M6-2O"] = _domino
_BUILDERS["M18-O-6"] = _hex_cell_with_legs

_CACHE: dict[str, Motif] = {}


def catalog_names() -> list[str]:
    return sorted(_BUILDERS, key=lambda n: (_BUILDERS[n]().vertex_count, n))


def builtin_motif(name: str) -> Motif:
    """Look up a catalog motif by name, e.g. ``"M4"`` or ``"M6-O"``."""
    if name not in _CACHE:
        try:
            build = _BUILDERS[name]
        except KeyError:
            raise MotifError(f"unknown motif {name!r}; catalog: {', '.join(catalog_names())}") from None
        _CACHE[name] = Motif(name, build())
    return _CACHE[name]


def custom_motif(name: str, template: Graph) -> Motif:
    """Wrap a user template as a motif.  The template must be connected."""
    if template.vertex_count < 2 or template.edge_count == 0:
        raise MotifError(f"motif {name!r} needs at least 2 vertices and one edge")
    if not template.is_connected():
        raise MotifError(f"motif {name!r} template is disconnected")
    return Motif(name, template)


def _resolve(m: Motif | str) -> Motif:
    return m if isinstance(m, Motif) else builtin_motif(m)


class MotifSet(Sequence):
    """Motifs ordered by descending template size, ties by name.

    Always contains ``M2``; names are unique.
    """

    def __init__(self, motifs: Iterable[Motif | str]):
        resolved = [_resolve(m) for m in motifs]
        names = [m.name for m in resolved]
        if len(set(names)) != len(names):
            raise MotifError(f"duplicate motif names in {names}")
        if "M2" not in names:
            raise MotifError("a motif set must contain M2")
        self._motifs = tuple(sorted(resolved, key=lambda m: (-m.size, m.name)))

    def __getitem__(self, i):
        return self._motifs[i]

    def __len__(self) -> int:
        return len(self._motifs)

    @property
    def names(self) -> list[str]:
        return [m.name for m in self._motifs]

    def get(self, name: str) -> Motif:
        for m in self._motifs:
            if m.name == name:
                return m
        raise KeyError(name)

    def __eq__(self, other) -> bool:
        return isinstance(other, MotifSet) and self._motifs == other._motifs

    def __hash__(self) -> int:
        return hash(self._motifs)

    def __repr__(self) -> str:
        return f"MotifSet({self.names})"


def motif_set(motifs: Iterable[Motif | str] | str) -> MotifSet:
    """Build a set from names or motifs, adding ``M2`` if it is missing.

    A string is split on commas: ``motif_set("M4-O,M6-O")``.
    """
    if isinstance(motifs, str):
        motifs = [s.strip() for s in motifs.split(",") if s.strip()]
    resolved = [_resolve(m) for m in motifs]
    if "M2" not in {m.name for m in resolved}:
        resolved.append(builtin_motif("M2"))
    return MotifSet(resolved)


_DEFAULTS = {
    "heavy-hex": ("M4", "M2"),
    "square-grid": ("M6-O", "M4-O", "M2"),
    # smallest set that saves join iterations over M2 alone on unknown graphs
    "generic": ("M3", "M2"),
}


def default_motif_set(topology: str = "generic") -> MotifSet:
    try:
        return MotifSet(_DEFAULTS[topology])
    except KeyError:
        raise MotifError(f"unknown topology {topology!r}; choose from {sorted(_DEFAULTS)}") from None
