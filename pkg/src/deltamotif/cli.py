"""Command-line interface.

Subcommands::

    deltamotif enumerate --data G.txt --pattern P.txt [--motifs M4,M2] [--mode mono|induced]
                         [--engine delta|vf2] [--out matches.csv]
    deltamotif build-db  --data G.txt --motifs M4,M2 --out db/
    deltamotif bench     --topology square-grid --size 100 --pattern-sizes 10,20 --seeds 5
                         [--motif-sets "M2;M4-O,M2"] [--engines delta,delta-cached,vf2]
    deltamotif layout    --device dev.txt --pattern circuit.txt --top-k 10 [--db db/]

Exit status: 0 on success, 1 when the computation fails (or engines disagree
in ``bench``), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import ENGINES, TOPOLOGIES, parse_engines, parse_motif_sets, run_bench
from .decompose import DecompositionError
from .engine import DatabaseError, build_database, count_matches, load_database, save_database
from .graph import GraphError, load_graph
from .layout import attach_scores, load_device, select_layouts
from .motifs import MotifError, default_motif_set, motif_set
from .table import EmbeddingTable, MemoryBudgetError, TableFormatError, sort_rows, write_csv
from .vf2 import vf2_enumerate

# failures that are reported as exit 1 rather than a traceback
_FAILURES = (GraphError, MotifError, DecompositionError, DatabaseError, TableFormatError,
             MemoryBudgetError, ValueError, KeyError, OSError)


def _motifs(text: str | None, fallback: str = "generic"):
    return motif_set(text) if text else default_motif_set(fallback)


def _emit_table(t: EmbeddingTable, out: str | None) -> None:
    if out:
        write_csv(t, out)
    else:
        write_csv(t, sys.stdout)


def cmd_enumerate(args) -> int:
    data = load_graph(args.data)
    pattern = load_graph(args.pattern)
    if args.engine == "vf2":
        t0 = time.perf_counter()
        table = vf2_enumerate(pattern, data, args.mode)
        elapsed = time.perf_counter() - t0
        timings = {"prep_seconds": 0.0, "compute_seconds": elapsed, "total_seconds": elapsed}
    else:
        res = count_matches(pattern, data, args.mode, motifs=_motifs(args.motifs))
        table, timings = res.table, res.timings()
    if args.out:
        write_csv(sort_rows(table), args.out)
    print(f"count {len(table)}")
    for k, v in timings.items():
        print(f"{k} {v:.6f}")
    return 0


def cmd_build_db(args) -> int:
    data = load_graph(args.data)
    db = build_database(data, _motifs(args.motifs))
    save_database(db, args.out)
    for name in db.motifs.names:
        print(f"{name} rows {len(db[name])} build_seconds {db.build_times[name]:.6f}")
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.pattern_sizes.split(",") if s.strip()]
        engines = parse_engines(args.engines)
        sets = parse_motif_sets(args.motif_sets, args.topology)
    except (ValueError, MotifError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    report = None
    for _ in range(max(args.repeats, 1)):
        rep = run_bench(args.topology, args.size, sizes, args.seeds, sets, engines, args.mode,
                        parallel_cases=args.parallel_cases)
        if report is None:
            report = rep
        else:  # keep the fastest repeat of each record
            for i, r in enumerate(rep.records):
                if r.total_seconds < report.records[i].total_seconds:
                    report.records[i] = r
    if args.out:
        with open(args.out, "w", newline="") as fh:
            report.to_csv(fh)
    else:
        sys.stdout.write(report.to_csv())
    bad = report.disagreements()
    if bad:
        for case in bad:
            print(f"engines disagree on case data={case[0]} seed={case[1]} size={case[2]}", file=sys.stderr)
        return 1
    return 0


def cmd_layout(args) -> int:
    device = load_device(args.device)
    pattern = load_graph(args.pattern)
    motifs = _motifs(args.motifs)
    t0 = time.perf_counter()
    if args.db and (Path(args.db) / "manifest.json").exists():
        db = load_database(args.db, device.coupling)
    else:
        db = build_database(device.coupling, motifs)
        if args.db:
            save_database(db, args.db)
    prep = time.perf_counter() - t0
    t0 = time.perf_counter()
    scored_db = attach_scores(db, device)
    attach = time.perf_counter() - t0
    result = select_layouts(pattern, scored_db, device, args.top_k, args.mode)
    timings = dict(result.timings)
    timings["scoring_seconds"] += attach
    timings["prep_seconds"] = prep
    timings["layouts"] = len(result.table)
    _emit_table(result.top(), args.out)
    text = json.dumps(timings, indent=2)
    if args.timings:
        Path(args.timings).write_text(text)
    else:
        print(text, file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deltamotif", description="Subgraph enumeration by motif join-and-filter.")
    sub = p.add_subparsers(dest="command", required=True)
    mode_kw = dict(choices=["mono", "monomorphism", "induced"], default="monomorphism")

    e = sub.add_parser("enumerate", help="list all matches of a pattern")
    e.add_argument("--data", required=True)
    e.add_argument("--pattern", required=True)
    e.add_argument("--motifs", help="comma-separated motif names (M2 is always added)")
    e.add_argument("--mode", **mode_kw)
    e.add_argument("--engine", choices=["delta", "vf2"], default="delta")
    e.add_argument("--out", help="CSV of matches, rows sorted")
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("build-db", help="precompute and save a motif database")
    b.add_argument("--data", required=True)
    b.add_argument("--motifs")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build_db)

    r = sub.add_parser("bench", help="compare engines on random lattice patterns")
    r.add_argument("--topology", choices=TOPOLOGIES, required=True)
    r.add_argument("--size", required=True, help="vertex count, RxC, or a heavy-hex preset (hh1990, hh4485)")
    r.add_argument("--pattern-sizes", required=True)
    r.add_argument("--seeds", type=int, default=10)
    r.add_argument("--motif-sets", help='sets separated by ";", e.g. "M2;M4-O,M2"')
    r.add_argument("--engines", default=",".join(ENGINES))
    r.add_argument("--mode", **mode_kw)
    r.add_argument("--repeats", type=int, default=1)
    r.add_argument("--parallel-cases", type=int, default=1)
    r.add_argument("--out")
    r.set_defaults(func=cmd_bench)

    lay = sub.add_parser("layout", help="rank qubit layouts of a circuit interaction graph")
    lay.add_argument("--device", required=True)
    lay.add_argument("--pattern", required=True)
    lay.add_argument("--motifs")
    lay.add_argument("--top-k", type=int, default=10)
    lay.add_argument("--db", help="cached database directory (created when missing)")
    lay.add_argument("--mode", **mode_kw)
    lay.add_argument("--out", help="CSV of the top layouts (default stdout)")
    lay.add_argument("--timings", help="JSON timing breakdown (default stderr)")
    lay.set_defaults(func=cmd_layout)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
