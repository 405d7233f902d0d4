"""Exhaustive reference enumeration for small instances.

Tries every injective map with :func:`itertools.permutations`; shares no
code with the matcher or the join engine.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .graph import Graph
from .table import EmbeddingTable


def brute_force_enumerate(pattern: Graph, data: Graph, mode: str = "monomorphism") -> EmbeddingTable:
    k = pattern.vertex_count
    n = data.vertex_count
    pedges = [tuple(e) for e in pattern.edges.tolist()]
    pedge_set = set(pedges)
    dset = {(u, v) for u, v in data.edges.tolist()}
    dset |= {(v, u) for u, v in dset}
    nonedges = [(a, b) for a in range(k) for b in range(a + 1, k) if (a, b) not in pedge_set]
    induced = mode in ("induced",)
    rows = []
    for f in permutations(range(n), k):
        if all((f[a], f[b]) in dset for a, b in pedges):
            if induced and any((f[a], f[b]) in dset for a, b in nonedges):
                continue
            rows.append(f)
    return EmbeddingTable(range(k), np.array(rows, dtype=np.int64).reshape(len(rows), k))


def count_mappings(pattern: Graph, data: Graph, mode: str = "monomorphism") -> int:
    return len(brute_force_enumerate(pattern, data, mode))
