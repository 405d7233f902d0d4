"""VF2-style backtracking matcher.

Used two ways: full enumeration (the baseline the join engine is checked
and timed against) and first-match search inside pattern decomposition.

Pattern vertices are matched in a fixed connectivity-first order: the next
vertex is the one with the most already-ordered neighbours, ties going to
higher degree and then lower id.  Candidates for a vertex with an ordered
neighbour are drawn from the data neighbours of that neighbour's image.
A pair ``(u, c)`` is feasible when ``c`` is unused, every earlier
neighbour of ``u`` maps to a neighbour of ``c`` (and, in induced mode, no
earlier non-neighbour does), and ``c`` has at least as many unused
neighbours as ``u`` has unmatched ones.
"""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np

from .graph import Graph
from .table import EmbeddingTable

__all__ = ["MODES", "match_order", "vf2_iter", "vf2_enumerate", "vf2_first", "automorphisms"]

MODES = ("monomorphism", "induced")


def check_mode(mode: str) -> str:
    aliases = {"mono": "monomorphism", "monomorphism": "monomorphism", "induced": "induced"}
    try:
        return aliases[mode]
    except KeyError:
        raise ValueError(f"unknown matching mode {mode!r}; use one of {MODES}") from None


def match_order(pattern: Graph) -> list[int]:
    """Connectivity-first vertex order used by the matcher."""
    k = pattern.vertex_count
    deg = pattern.degree()
    adj = pattern.adjacency
    placed = np.zeros(k, dtype=bool)
    links = np.zeros(k, dtype=np.int64)
    order = []
    for _ in range(k):
        best = None
        for v in range(k):
            if placed[v]:
                continue
            key = (links[v], deg[v], -v)
            if best is None or key > best[0]:
                best = (key, v)
        v = best[1]
        order.append(v)
        placed[v] = True
        for w in adj[v]:
            links[w] += 1
    return order


def vf2_iter(pattern: Graph, data: Graph, mode: str = "monomorphism", order: list[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every match as a tuple ``t`` with ``t[u]`` the image of pattern vertex ``u``."""
    mode = check_mode(mode)
    k = pattern.vertex_count
    if k == 0:
        yield ()
        return
    if k > data.vertex_count:
        return
    if order is None:
        order = match_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    padj = pattern.neighbor_sets
    pdeg = [len(a) for a in pattern.adjacency]
    dadj = data.adjacency
    dsets = data.neighbor_sets
    ddeg = [len(a) for a in dadj]
    n = data.vertex_count
    induced = mode == "induced"

    parent = []
    checks = []
    avoid = []
    for i, u in enumerate(order):
        earlier = [w for w in padj[u] if pos[w] < i]
        earlier.sort(key=lambda w: pos[w])
        parent.append(earlier[0] if earlier else -1)
        checks.append(earlier[1:])
        avoid.append([w for w in order[:i] if w not in padj[u]] if induced else [])
    # unmatched pattern neighbours of order[i] once order[:i+1] is matched
    pending = [sum(1 for w in padj[u] if pos[w] > i) for i, u in enumerate(order)]

    image = [-1] * k
    used = bytearray(n)
    all_vertices = range(n)

    def candidates(i):
        p = parent[i]
        return iter(all_vertices if p < 0 else dadj[image[p]])

    stack = [candidates(0)]
    while stack:
        i = len(stack) - 1
        u = order[i]
        if image[u] >= 0:
            used[image[u]] = 0
            image[u] = -1
        need = pdeg[u]
        want = pending[i]
        chk = checks[i]
        avd = avoid[i]
        for c in stack[i]:
            if used[c] or ddeg[c] < need:
                continue
            ok = True
            for w in chk:
                if c not in dsets[image[w]]:
                    ok = False
                    break
            if not ok:
                continue
            if avd:
                for w in avd:
                    if c in dsets[image[w]]:
                        ok = False
                        break
                if not ok:
                    continue
            if want:
                free = 0
                for x in dadj[c]:
                    if not used[x]:
                        free += 1
                if free < want:
                    continue
            image[u] = c
            used[c] = 1
            break
        else:
            stack.pop()
            continue
        if i + 1 == k:
            yield tuple(image)
        else:
            stack.append(candidates(i + 1))


def vf2_enumerate(pattern: Graph, data: Graph, mode: str = "monomorphism", limit: int | None = None) -> EmbeddingTable:
    """All matches as a table with one column per pattern vertex."""
    k = pattern.vertex_count
    if k < 1:
        raise ValueError("pattern must have at least one vertex")
    rows = []
    for m in vf2_iter(pattern, data, mode):
        rows.append(m)
        if limit is not None and len(rows) >= limit:
            break
    return EmbeddingTable(range(k), np.array(rows, dtype=np.int64).reshape(len(rows), k))


def vf2_first(pattern: Graph, data: Graph, mode: str = "monomorphism") -> dict[int, int] | None:
    """One match as ``{pattern vertex: data vertex}``, or ``None``."""
    for m in vf2_iter(pattern, data, mode):
        return dict(enumerate(m))
    return None


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All automorphisms of ``g`` as vertex permutations."""
    return list(vf2_iter(g, g, "induced"))
