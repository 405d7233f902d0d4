"""
Ranking qubit layouts on a heavy-hex device
===========================================

A circuit's interaction graph (which logical qubits share two-qubit gates)
is the pattern; the device coupling map is the data graph.  Every mapping
is a candidate layout, scored by the product of the fidelities it touches.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from deltamotif import attach_scores, build_database, load_device, load_graph, select_layouts
from deltamotif.cli import main as cli

HERE = Path(__file__).resolve().parent
device = load_device(HERE / "data" / "device.txt")
circuit = load_graph(HERE / "data" / "circuit.txt")
print("device:", device.coupling, " circuit:", circuit, circuit.labels)

# %%
# Motif tables are scored once per calibration; the scores then ride along
# through the joins.

db = attach_scores(build_database(device.coupling, "M4,M2"), device)
ranked = select_layouts(circuit, db, device, top_k=5)
print(len(ranked.table), "layouts; timings", {k: round(v, 5) for k, v in ranked.timings.items()})

top = ranked.top()
for row, score in zip(top.rows(), top.score):
    placement = ", ".join(f"{circuit.labels[q]}->{p}" for q, p in enumerate(row))
    print(f"{score:.5f}  {placement}")

# %%
# The score is simply node fidelities times coupling fidelities, so it can
# be recomputed directly.

best = top.rows()[0]
direct = np.prod(device.node_fidelity[list(best)])
for a, b in circuit.edge_list():
    direct *= device.edge_f([best[a]], [best[b]])[0]
print("recomputed:", direct)
assert abs(direct - top.score[0]) <= 1e-12 * direct

# %%
# The same pipeline from the command line, with a cached database directory.

out = Path(tempfile.mkdtemp())
code = cli(["layout", "--device", str(HERE / "data" / "device.txt"),
            "--pattern", str(HERE / "data" / "circuit.txt"), "--motifs", "M4,M2",
            "--top-k", "5", "--db", str(out / "db"),
            "--out", str(out / "top.csv"), "--timings", str(out / "timings.json")])
assert code == 0
print((out / "top.csv").read_text())
print(json.loads((out / "timings.json").read_text()))
