"""Benchmark harness: random lattice patterns, several engines, one CSV.

Each case is a (pattern size, seed, motif set) triple on one data graph.
The pattern is a connected subgraph sampled from the data graph itself, so
it always has at least one match.  Engines:

``delta-motif``
    builds the motif database and then queries it; prep is part of the total.
``delta-motif-cached``
    queries a database built once per motif set; prep is reported as 0.
``vf2``
    the backtracking baseline; independent of the motif set.

Solution counts must agree across engines for every case.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .engine import build_database, count_matches
from .graph import Graph, GraphError, closest_heavy_hex, heavy_hex, heavy_hex_preset, random_connected_subgraph, square_grid
from .motifs import MotifSet, default_motif_set, motif_set
from .vf2 import vf2_enumerate

__all__ = ["BenchRecord", "BenchReport", "ENGINES", "run_bench", "make_topology", "parse_engines", "parse_motif_sets"]

BENCH_SCHEMA = "# deltamotif-bench v1"
ENGINES = ("delta-motif", "delta-motif-cached", "vf2")
_ENGINE_ALIASES = {
    "delta": "delta-motif",
    "delta-motif": "delta-motif",
    "cached": "delta-motif-cached",
    "delta-cached": "delta-motif-cached",
    "delta-motif-cached": "delta-motif-cached",
    "vf2": "vf2",
}
TOPOLOGIES = ("heavy-hex", "square-grid")


def parse_engines(text: str | Iterable[str]) -> tuple[str, ...]:
    names = text.split(",") if isinstance(text, str) else list(text)
    out = []
    for n in names:
        n = n.strip()
        if not n:
            continue
        if n not in _ENGINE_ALIASES:
            raise ValueError(f"unknown engine {n!r}; choose from {sorted(_ENGINE_ALIASES)}")
        if _ENGINE_ALIASES[n] not in out:
            out.append(_ENGINE_ALIASES[n])
    return tuple(out)


def parse_motif_sets(text: str | None, topology: str) -> list[MotifSet]:
    """``"M4,M2;M2"`` -> two sets.  Empty means the topology default."""
    if not text:
        return [default_motif_set(topology)]
    return [motif_set(part) for part in text.split(";") if part.strip()]


def make_topology(topology: str, size: str | int) -> tuple[str, Graph]:
    """Data graph for a topology and a size.

    ``size`` is a vertex count (the nearest square grid / heavy-hex lattice is
    used), ``RxC`` for explicit grid dimensions, or a heavy-hex preset name.
    """
    size = str(size).strip()
    if topology == "square-grid":
        if "x" in size:
            r, c = (int(s) for s in size.split("x"))
        else:
            r = c = max(1, round(math.sqrt(int(size))))
        return f"square-grid-{r}x{c}", square_grid(r, c)
    if topology == "heavy-hex":
        if size.startswith("hh"):
            return size, heavy_hex_preset(size)
        if "x" in size:
            r, c = (int(s) for s in size.split("x"))
        else:
            r, c = closest_heavy_hex(int(size))
        return f"heavy-hex-{r}x{c}", heavy_hex(r, c)
    raise ValueError(f"unknown topology {topology!r}; choose from {TOPOLOGIES}")


@dataclass
class BenchRecord:
    data: str
    pattern_seed: int
    pattern_size: int
    motif_set: str
    engine: str
    solutions: int
    prep_seconds: float
    decompose_seconds: float
    compute_seconds: float
    total_seconds: float
    speedup_total: float = float("nan")  # T_vf2 / T_this for delta rows

    @property
    def case(self) -> tuple:
        return (self.data, self.pattern_seed, self.pattern_size)


@dataclass
class BenchReport:
    records: list[BenchRecord]

    def __len__(self) -> int:
        return len(self.records)

    def disagreements(self) -> list[tuple]:
        """Cases where engines report different solution counts."""
        counts: dict[tuple, set[int]] = {}
        for r in self.records:
            counts.setdefault(r.case, set()).add(r.solutions)
        return sorted(c for c, s in counts.items() if len(s) > 1)

    @property
    def all_agree(self) -> bool:
        return not self.disagreements()

    def median_total(self, engine: str, motif_set: str | None = None) -> float:
        vals = [r.total_seconds for r in self.records
                if r.engine == engine and (motif_set is None or r.motif_set in (motif_set, ""))]
        return statistics.median(vals) if vals else float("nan")

    def to_csv(self, fh=None) -> str:
        own = fh is None
        fh = io.StringIO() if own else fh
        fh.write(BENCH_SCHEMA + "\n")
        w = csv.writer(fh, lineterminator="\n")
        names = [f.name for f in fields(BenchRecord)]
        w.writerow(names)
        for r in self.records:
            row = asdict(r)
            w.writerow([repr(row[n]) if isinstance(row[n], float) else row[n] for n in names])
        return fh.getvalue() if own else ""


def _run_case(data_id: str, data: Graph, size: int, seed: int, sets: Sequence[MotifSet],
              dbs: dict, engines: Sequence[str], mode: str) -> list[BenchRecord]:
    pattern = random_connected_subgraph(data, size, seed=seed).graph
    out = []
    vf2_total = None
    if "vf2" in engines:
        t0 = time.perf_counter()
        n = len(vf2_enumerate(pattern, data, mode))
        vf2_total = time.perf_counter() - t0
        out.append(BenchRecord(data_id, seed, size, "", "vf2", n, 0.0, 0.0, vf2_total, vf2_total))
    for ms in sets:
        label = ",".join(ms.names)
        if "delta-motif" in engines:
            res = count_matches(pattern, data, mode, motifs=ms)
            out.append(BenchRecord(data_id, seed, size, label, "delta-motif", res.count, res.prep_seconds,
                                   res.decompose_seconds, res.compute_seconds, res.total_seconds))
        if "delta-motif-cached" in engines:
            res = count_matches(pattern, dbs[label], mode)
            out.append(BenchRecord(data_id, seed, size, label, "delta-motif-cached", res.count, 0.0,
                                   res.decompose_seconds, res.compute_seconds, res.total_seconds))
    if vf2_total is not None:
        for r in out:
            if r.engine != "vf2" and r.total_seconds > 0:
                r.speedup_total = vf2_total / r.total_seconds
    return out


def _case_worker(args):
    data_id, data, size, seed, sets, engines, mode = args
    dbs = {",".join(ms.names): build_database(data, ms) for ms in sets} if "delta-motif-cached" in engines else {}
    return _run_case(data_id, data, size, seed, sets, dbs, engines, mode)


def run_bench(topology: str, size: str | int, pattern_sizes: Sequence[int], seeds: int | Sequence[int],
              motif_sets: Sequence[MotifSet] | None = None, engines: Sequence[str] = ENGINES,
              mode: str = "monomorphism", parallel_cases: int = 1, progress=None) -> BenchReport:
    """Run every (pattern size, seed, motif set, engine) combination.

    ``seeds`` is a count (seeds ``0..k-1``) or an explicit list.  With
    ``parallel_cases > 1`` cases run in worker processes; timings are then
    only indicative.
    """
    data_id, data = make_topology(topology, size)
    if motif_sets is None:
        motif_sets = [default_motif_set(topology)]
    seeds = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    engines = parse_engines(engines)
    cases = [(s, seed) for s in pattern_sizes for seed in seeds]
    for s, _ in cases:
        if s > data.vertex_count:
            raise GraphError(f"pattern size {s} exceeds data graph size {data.vertex_count}")
    records: list[BenchRecord] = []
    if parallel_cases > 1 and cases:
        jobs = [(data_id, data, s, seed, motif_sets, engines, mode) for s, seed in cases]
        with ProcessPoolExecutor(parallel_cases) as pool:
            for recs in pool.map(_case_worker, jobs):
                records.extend(recs)
        return BenchReport(records)
    dbs = {}
    if "delta-motif-cached" in engines and cases:
        dbs = {",".join(ms.names): build_database(data, ms) for ms in motif_sets}
    for s, seed in cases:
        recs = _run_case(data_id, data, s, seed, motif_sets, dbs, engines, mode)
        records.extend(recs)
        if progress is not None:
            progress(recs)
    return BenchReport(records)
