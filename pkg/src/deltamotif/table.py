"""Columnar embedding tables and the join/filter primitives.

An :class:`EmbeddingTable` holds one embedding per row and one column per
vertex slot.  Column names are integers (motif slots or pattern vertex ids).
Values are stored as an ``(rows, columns)`` int32 array, with an optional
float64 score per row.

Binary format (little-endian)::

    magic     4s   b"DMET"
    version   u2   1
    flags     u2   bit 0 set when a score block follows
    ncols     u4
    nrows     u8
    names     i4 * ncols
    ids       i4 * nrows * ncols   (row-major)
    scores    f8 * nrows           (only when flag bit 0 is set)
"""

from __future__ import annotations

import csv
import io
import os
import struct
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

__all__ = [
    "EmbeddingTable",
    "JoinConstraint",
    "MemoryBudgetError",
    "TableFormatError",
    "DEFAULT_MAX_ROWS",
    "max_rows",
    "inner_join",
    "filter_overlaps",
    "dedup_canonical",
    "sort_rows",
    "write_csv",
    "read_csv",
    "write_binary",
    "read_binary",
]

ID_DTYPE = np.int32
DEFAULT_MAX_ROWS = 2**27
MAX_ROWS_ENV = "DELTAMOTIF_MAX_ROWS"

# rows gathered per block in inner_join; bounds peak memory of the raw join
_CHUNK_ROWS = 1 << 19

_MAGIC = b"DMET"
_VERSION = 1
_HEADER = struct.Struct("<4sHHIQ")


class MemoryBudgetError(MemoryError):
    """An intermediate table would exceed the row budget."""

    def __init__(self, rows: int, budget: int, context: str = ""):
        self.rows = rows
        self.budget = budget
        msg = f"join would produce {rows} rows, over the budget of {budget}"
        if context:
            msg += f" ({context})"
        super().__init__(msg + "; try a different motif set or raise " + MAX_ROWS_ENV)


class TableFormatError(ValueError):
    pass


def max_rows() -> int:
    """Row budget for intermediate tables (env ``DELTAMOTIF_MAX_ROWS``)."""
    value = os.environ.get(MAX_ROWS_ENV)
    return int(value) if value else DEFAULT_MAX_ROWS


class EmbeddingTable:
    """Immutable table of embeddings.

    Parameters
    ----------
    columns : sequence of int
        Unique column names.
    values : array-like of shape (rows, len(columns))
        Vertex ids.
    score : array-like of shape (rows,), optional
        Per-row score.
    """

    __slots__ = ("columns", "values", "score", "_index")

    def __init__(self, columns: Sequence[int], values, score=None):
        columns = tuple(int(c) for c in columns)
        if len(set(columns)) != len(columns):
            raise ValueError(f"duplicate column names: {columns}")
        values = np.asarray(values, dtype=ID_DTYPE)
        if values.size == 0:
            values = values.reshape(0, len(columns))
        if values.ndim != 2 or values.shape[1] != len(columns):
            raise ValueError(f"values shape {values.shape} does not match {len(columns)} columns")
        if score is not None:
            score = np.asarray(score, dtype=np.float64).reshape(-1)
            if len(score) != len(values):
                raise ValueError("score length does not match row count")
            score.setflags(write=False)
        values.setflags(write=False)
        self.columns = columns
        self.values = values
        self.score = score
        self._index = {c: i for i, c in enumerate(columns)}

    @classmethod
    def empty(cls, columns: Sequence[int], scored: bool = False) -> EmbeddingTable:
        return cls(columns, np.empty((0, len(columns)), ID_DTYPE), np.empty(0) if scored else None)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def arity(self) -> int:
        return len(self.columns)

    def column(self, name: int) -> np.ndarray:
        return self.values[:, self.col_index(name)]

    def col_index(self, name: int) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no column {name!r} in table with columns {self.columns}") from None

    def rename(self, mapping: dict[int, int] | Sequence[int]) -> EmbeddingTable:
        """Rename columns; ``mapping`` is a dict or a full list of new names."""
        if isinstance(mapping, dict):
            cols = [mapping.get(c, c) for c in self.columns]
        else:
            cols = list(mapping)
        return EmbeddingTable(cols, self.values, self.score)

    def select(self, columns: Sequence[int]) -> EmbeddingTable:
        """Reorder/project columns."""
        idx = [self.col_index(c) for c in columns]
        return EmbeddingTable(columns, self.values[:, idx], self.score)

    def take(self, rows) -> EmbeddingTable:
        score = None if self.score is None else self.score[rows]
        return EmbeddingTable(self.columns, self.values[rows], score)

    def with_score(self, score) -> EmbeddingTable:
        return EmbeddingTable(self.columns, self.values, score)

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(r) for r in self.values.tolist()]

    def equals(self, other: EmbeddingTable, check_score: bool = True) -> bool:
        """Exact equality of names, values and (optionally) scores, row order included."""
        if self.columns != other.columns or not np.array_equal(self.values, other.values):
            return False
        if not check_score:
            return True
        if (self.score is None) != (other.score is None):
            return False
        return self.score is None or np.array_equal(self.score, other.score)

    def __repr__(self) -> str:
        scored = ", scored" if self.score is not None else ""
        return f"EmbeddingTable(columns={list(self.columns)}, rows={len(self)}{scored})"


@dataclass(frozen=True)
class JoinConstraint:
    """Equality between ``left_column`` of the left table and ``right_column`` of the right."""

    left_column: int
    right_column: int


def _dense_keys(left: np.ndarray, right: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map composite key rows of both sides to shared int64 codes."""
    if left.shape[1] == 1:
        return left[:, 0].astype(np.int64), right[:, 0].astype(np.int64)
    hi = int(max(left.max(initial=0), right.max(initial=0))) + 1
    k = left.shape[1]
    if k * np.log2(max(hi, 2)) < 62:
        base = np.int64(hi)
        lk = np.zeros(len(left), np.int64)
        rk = np.zeros(len(right), np.int64)
        for j in range(k):
            lk = lk * base + left[:, j]
            rk = rk * base + right[:, j]
        return lk, rk
    both = np.concatenate([left, right])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1).astype(np.int64)
    return inv[: len(left)], inv[len(left):]


def join_indices(left_keys: np.ndarray, right_keys: np.ndarray, budget: int | None = None,
                 context: str = "") -> tuple[np.ndarray, np.ndarray]:
    """Row index pairs of an equi-join on 2-D key arrays.

    The smaller side is sorted and probed with binary search, so each probe
    row finds its whole run of matches at once.
    """
    lk, rk = _dense_keys(left_keys, right_keys)
    swap = len(lk) < len(rk)
    build, probe = (lk, rk) if swap else (rk, lk)
    order = np.argsort(build, kind="stable")
    sorted_build = build[order]
    lo = np.searchsorted(sorted_build, probe, side="left")
    hi = np.searchsorted(sorted_build, probe, side="right")
    counts = hi - lo
    total = int(counts.sum())
    if budget is not None and total > budget:
        raise MemoryBudgetError(total, budget, context)
    probe_idx = np.repeat(np.arange(len(probe), dtype=np.int64), counts)
    starts = np.repeat(lo - (np.cumsum(counts) - counts), counts)
    build_idx = order[starts + np.arange(total, dtype=np.int64)]
    return (build_idx, probe_idx) if swap else (probe_idx, build_idx)


def inner_join(left: EmbeddingTable, right: EmbeddingTable, constraints: Sequence[JoinConstraint],
               budget: int | None = None, distinct: bool = False) -> EmbeddingTable:
    """Equi-join two tables on the given column equalities.

    Constrained right columns are merged into their left partners.  Any other
    right column whose name clashes with a left column is renamed to the next
    unused integer.  Scores multiply when both sides carry one.

    ``distinct=True`` fuses :func:`filter_overlaps` into the join: it assumes
    both inputs are injective and drops output rows where a right-side
    non-key value repeats a left value (or another right value).
    """
    if not constraints:
        raise ValueError("inner_join needs at least one constraint")
    li = [left.col_index(c.left_column) for c in constraints]
    ri = [right.col_index(c.right_column) for c in constraints]
    keyed = set(ri)
    rest = [j for j in range(right.arity) if j not in keyed]
    taken = set(left.columns)
    names = list(left.columns)
    fresh = max(list(left.columns) + list(right.columns), default=-1) + 1
    for j in rest:
        name = right.columns[j]
        if name in taken:
            name = fresh
            fresh += 1
        taken.add(name)
        names.append(name)
    if budget is None:
        budget = max_rows()
    lidx, ridx = join_indices(left.values[:, li], right.values[:, ri], budget)
    k = left.arity
    added = right.values[:, rest]
    parts = []
    kept = []
    for lo in range(0, max(len(lidx), 1), _CHUNK_ROWS):
        li_, ri_ = lidx[lo:lo + _CHUNK_ROWS], ridx[lo:lo + _CHUNK_ROWS]
        block = np.empty((len(li_), k + len(rest)), dtype=ID_DTYPE)
        block[:, :k] = left.values[li_]
        block[:, k:] = added[ri_]
        if distinct and rest:
            keep = _distinct_from(block[:, :k], block[:, k:])
            if not keep.all():
                block = block[keep]
                li_, ri_ = li_[keep], ri_[keep]
        parts.append(block)
        kept.append((li_, ri_))
    values = parts[0] if len(parts) == 1 else np.concatenate(parts)
    if len(kept) > 1:
        lidx = np.concatenate([a for a, _ in kept])
        ridx = np.concatenate([b for _, b in kept])
    else:
        lidx, ridx = kept[0]
    if left.score is not None and right.score is not None:
        score = left.score[lidx] * right.score[ridx]
    elif left.score is not None:
        score = left.score[lidx]
    elif right.score is not None:
        score = right.score[ridx]
    else:
        score = None
    return EmbeddingTable(names, values, score)


def injective_mask(values: np.ndarray, new_columns: Sequence[int] | None = None) -> np.ndarray:
    """Rows whose entries are pairwise distinct.

    With ``new_columns`` (column positions), only pairs involving a new
    column are compared; the remaining columns are assumed distinct already.
    """
    n, k = values.shape
    if k < 2 or n == 0:
        return np.ones(n, dtype=bool)
    if new_columns is None:
        s = np.sort(values, axis=1)
        return (s[:, 1:] != s[:, :-1]).all(axis=1)
    new = sorted(set(new_columns))
    old = [j for j in range(k) if j not in set(new)]
    return _distinct_from(values[:, old], values[:, new])


def _distinct_from(old: np.ndarray, new: np.ndarray) -> np.ndarray:
    """Rows where every ``new`` entry differs from all of ``old`` and from each other."""
    mask = np.ones(len(new), dtype=bool)
    for j in range(new.shape[1]):
        col = new[:, j:j + 1]
        if old.shape[1]:
            mask &= (old != col).all(axis=1)
        if j + 1 < new.shape[1]:
            mask &= (new[:, j + 1:] != col).all(axis=1)
    return mask


def filter_overlaps(t: EmbeddingTable, expected_shared: int = 0, new_columns: Sequence[int] | None = None) -> EmbeddingTable:
    """Drop rows that reuse a vertex.

    Key columns are already merged by :func:`inner_join`, so the
    ``expected_shared`` duplicates no longer appear and the rule reduces to
    "distinct-count equals arity".  ``new_columns`` (names) restricts the
    check to pairs involving those columns.
    """
    if expected_shared < 0:
        raise ValueError("expected_shared must be >= 0")
    positions = None if new_columns is None else [t.col_index(c) for c in new_columns]
    mask = injective_mask(t.values, positions)
    if mask.all():
        return t
    return t.take(mask)


def dedup_canonical(t: EmbeddingTable, automorphisms: Sequence[Sequence[int]] | None = None) -> EmbeddingTable:
    """Keep one row per orbit of slot permutations.

    ``automorphisms`` lists permutations of column positions (e.g. from
    :func:`deltamotif.vf2.automorphisms`); row ``r`` and ``r[perm]`` are
    treated as the same subgraph.  Without it, rows with the same vertex set
    collapse.  The first row of each orbit (in table order) is kept.
    """
    if len(t) == 0:
        return t
    if automorphisms is None:
        canon = np.sort(t.values, axis=1)
    else:
        canon = None
        for perm in automorphisms:
            cand = t.values[:, list(perm)]
            if canon is None:
                canon = cand.copy()
                continue
            # rowwise lexicographic minimum
            diff = cand != canon
            first = np.where(diff.any(axis=1), diff.argmax(axis=1), 0)
            rows = np.arange(len(cand))
            smaller = cand[rows, first] < canon[rows, first]
            canon[smaller] = cand[smaller]
    _, keep = np.unique(canon, axis=0, return_index=True)
    keep.sort()
    return t.take(keep)


def sort_rows(t: EmbeddingTable) -> EmbeddingTable:
    """Columns in ascending name order, rows lexicographically sorted."""
    order = sorted(range(t.arity), key=lambda j: t.columns[j])
    cols = [t.columns[j] for j in order]
    vals = t.values[:, order]
    if len(vals) == 0:
        return EmbeddingTable(cols, vals, t.score)
    idx = np.lexsort(vals.T[::-1])
    score = None if t.score is None else t.score[idx]
    return EmbeddingTable(cols, vals[idx], score)


CSV_SCHEMA = "# deltamotif-table v1"


def write_csv(t: EmbeddingTable, path_or_file) -> None:
    """CSV with a schema comment line, a header of column names and optional ``score``."""
    own = not hasattr(path_or_file, "write")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write(CSV_SCHEMA + "\n")
        w = csv.writer(fh, lineterminator="\n")
        header = [str(c) for c in t.columns]
        if t.score is not None:
            header.append("score")
        w.writerow(header)
        if t.score is None:
            w.writerows(t.values.tolist())
        else:
            for row, s in zip(t.values.tolist(), t.score.tolist()):
                w.writerow(row + [repr(s)])
    finally:
        if own:
            fh.close()


def read_csv(path_or_file) -> EmbeddingTable:
    own = not hasattr(path_or_file, "read")
    fh = open(path_or_file, newline="") if own else path_or_file
    try:
        lines = [ln for ln in fh.read().splitlines() if ln and not ln.startswith("#")]
    finally:
        if own:
            fh.close()
    if not lines:
        raise TableFormatError("missing CSV header")
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = next(reader)
    scored = bool(header) and header[-1] == "score"
    names = header[:-1] if scored else header
    try:
        columns = [int(c) for c in names]
    except ValueError as exc:
        raise TableFormatError(f"non-integer column name in header {header}") from exc
    rows = list(reader)
    width = len(header)
    for i, r in enumerate(rows, 2):
        if len(r) != width:
            raise TableFormatError(f"row {i} has {len(r)} fields, expected {width}")
    if scored:
        values = [[int(x) for x in r[:-1]] for r in rows]
        score = [float(r[-1]) for r in rows]
    else:
        values = [[int(x) for x in r] for r in rows]
        score = None
    return EmbeddingTable(columns, np.array(values, dtype=np.int64).reshape(len(rows), len(columns)), score)


def write_binary(t: EmbeddingTable, path) -> None:
    flags = 1 if t.score is not None else 0
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, flags, t.arity, len(t)))
        fh.write(np.asarray(t.columns, dtype="<i4").tobytes())
        fh.write(np.ascontiguousarray(t.values, dtype="<i4").tobytes())
        if t.score is not None:
            fh.write(np.ascontiguousarray(t.score, dtype="<f8").tobytes())


def read_binary(path) -> EmbeddingTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TableFormatError(f"{path}: truncated header")
    magic, version, flags, ncols, nrows = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise TableFormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise TableFormatError(f"{path}: unsupported version {version}")
    off = _HEADER.size
    expected = off + 4 * ncols + 4 * ncols * nrows + (8 * nrows if flags & 1 else 0)
    if len(data) != expected:
        raise TableFormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    names = np.frombuffer(data, "<i4", ncols, off)
    off += 4 * ncols
    values = np.frombuffer(data, "<i4", ncols * nrows, off).reshape(nrows, ncols)
    off += 4 * ncols * nrows
    score = np.frombuffer(data, "<f8", nrows, off).copy() if flags & 1 else None
    return EmbeddingTable(names.tolist(), values.astype(ID_DTYPE), score)
