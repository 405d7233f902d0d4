import json

import numpy as np
import pytest

from deltamotif.engine import build_database
from deltamotif.graph import Graph, ParseError, complete_graph, heavy_hex, path_graph, random_connected_subgraph, square_grid
from deltamotif.layout import (
    DeviceModel,
    attach_scores,
    load_device,
    random_device,
    select_layouts,
    write_device,
)
from deltamotif.vf2 import vf2_enumerate


def recompute(rows, pattern, device):
    """Plain-Python score: node fidelities of the row times edge fidelities of its pattern edges."""
    efid = dict(zip(device.coupling.edge_list(), device.edge_fidelity.tolist()))
    out = []
    for r in rows:
        s = 1.0
        for v in r:
            s *= float(device.node_fidelity[v])
        for a, b in pattern.edge_list():
            s *= efid[tuple(sorted((r[a], r[b])))]
        out.append(s)
    return np.array(out)


def uniform_device(coupling, f):
    return DeviceModel(coupling, np.full(coupling.vertex_count, f), np.full(coupling.edge_count, f))


@pytest.fixture(scope="module")
def device():
    return random_device(heavy_hex(2, 2), seed=3)


def test_identity_weights():
    g = square_grid(4, 4)
    db = attach_scores(build_database(g, "M4-O,M3"), uniform_device(g, 1.0))
    for m in db.motifs:
        assert np.all(db[m.name].score == 1.0)


def test_m2_row_direct_product():
    g = path_graph(2)
    dev = DeviceModel(g, [0.99, 0.98], [0.95])
    db = attach_scores(build_database(g, "M2"), dev)
    assert db["M2"].score.tolist() == [0.99 * 0.98 * 0.95] * 2


def test_m3_rows_match_recompute(device):
    db = attach_scores(build_database(device.coupling, "M3,M2"), device)
    t = db["M3"]
    ref = recompute(t.rows(), path_graph(3), device)
    np.testing.assert_allclose(t.score, ref, rtol=1e-12, atol=0)


def test_attach_requires_matching_graph(device):
    db = build_database(square_grid(3, 3), "M2")
    with pytest.raises(ValueError, match="coupling"):
        attach_scores(db, device)


@pytest.mark.parametrize("motifs", ["M2", "M3,M2", "M4,M2", "M6-O,M4,M2"])
def test_scores_match_recompute_any_motif_set(device, motifs):
    db = attach_scores(build_database(device.coupling, motifs), device)
    for seed in range(6):
        p = random_connected_subgraph(device.coupling, 7, seed=seed).graph
        res = select_layouts(p, db, device, 5)
        ref = recompute(res.table.rows(), p, device)
        np.testing.assert_allclose(res.table.score, ref, rtol=1e-9, atol=0)


def test_grid_device_with_cycles():
    g = square_grid(5, 5)
    dev = random_device(g, seed=8)
    db = attach_scores(build_database(g, "M6-O,M4-O,M2"), dev)
    for seed in range(5):
        p = random_connected_subgraph(g, 9, seed=seed).graph
        res = select_layouts(p, db, dev, 3)
        np.testing.assert_allclose(res.table.score, recompute(res.table.rows(), p, dev), rtol=1e-9, atol=0)


def test_uniform_scores_exact():
    g = heavy_hex(2, 2)
    f = 0.97
    dev = uniform_device(g, f)
    db = attach_scores(build_database(g, "M4,M2"), dev)
    p = random_connected_subgraph(g, 8, seed=1).graph
    res = select_layouts(p, db, dev, 4)
    expect = f ** (p.vertex_count + p.edge_count)
    assert np.all(np.abs(res.table.score - expect) <= 1e-12 * expect)
    # degenerate ranking falls back to lexicographic row order
    top = res.top(4).rows()
    assert top == sorted(res.table.rows())[:4]


def test_perturb_one_edge(device):
    p = path_graph(5)
    db = attach_scores(build_database(device.coupling, "M4,M2"), device)
    base = select_layouts(p, db, device, 1)
    u, v = device.coupling.edge_list()[7]
    lowered = device.with_edge_fidelity(u, v, device.edge_fidelity[7] * 0.5)
    db2 = attach_scores(build_database(device.coupling, "M4,M2"), lowered)
    after = select_layouts(p, db2, lowered, 1)
    before = dict(zip(base.table.rows(), base.table.score.tolist()))
    for row, s in zip(after.table.rows(), after.table.score.tolist()):
        uses = any({row[a], row[b]} == {u, v} for a, b in p.edge_list())
        if uses:
            assert s < before[row]
        else:
            assert s == pytest.approx(before[row], rel=1e-12)


def test_raising_fidelity_never_lowers(device):
    p = path_graph(4)
    rng = np.random.default_rng(0)
    db = attach_scores(build_database(device.coupling, "M3,M2"), device)
    base = select_layouts(p, db, device, 1)
    before = dict(zip(base.table.rows(), base.table.score.tolist()))
    for _ in range(5):
        node = device.node_fidelity.copy()
        edge = device.edge_fidelity.copy()
        if rng.random() < 0.5:
            i = rng.integers(len(node))
            node[i] = min(1.0, node[i] + 0.05)
        else:
            i = rng.integers(len(edge))
            edge[i] = min(1.0, edge[i] + 0.05)
        up = DeviceModel(device.coupling, node, edge)
        res = select_layouts(p, attach_scores(db, up), up, 1)
        for row, s in zip(res.table.rows(), res.table.score.tolist()):
            assert s >= before[row] * (1 - 1e-12)


def test_top1_is_oracle_argmax(device):
    db = attach_scores(build_database(device.coupling, "M4,M2"), device)
    for seed in range(5):
        p = random_connected_subgraph(device.coupling, 6, seed=seed).graph
        res = select_layouts(p, db, device, 1)
        oracle = vf2_enumerate(p, device.coupling)
        scores = recompute(oracle.rows(), p, device)
        best = scores.max()
        top_row = res.top().rows()[0]
        winners = {r for r, s in zip(oracle.rows(), scores) if s >= best * (1 - 1e-12)}
        assert top_row in winners


def test_ranking_invariant_across_motif_sets(device):
    p = random_connected_subgraph(device.coupling, 8, seed=4).graph
    tops = []
    for ms in ("M2", "M4,M2", "M3,M2"):
        db = attach_scores(build_database(device.coupling, ms), device)
        tops.append(select_layouts(p, db, device, 10).top().rows())
    assert tops[0] == tops[1] == tops[2]


def test_ranking_is_permutation(device):
    db = attach_scores(build_database(device.coupling, "M4,M2"), device)
    res = select_layouts(path_graph(4), db, device, 3)
    assert sorted(res.ranking.tolist()) == list(range(len(res.table)))
    s = res.table.score[res.ranking]
    assert np.all(np.diff(s) <= 1e-12)
    assert np.all((s > 0) & (s <= 1))


def test_top_k_errors_and_empty(device):
    db = attach_scores(build_database(device.coupling, "M2"), device)
    with pytest.raises(ValueError):
        select_layouts(path_graph(3), db, device, 0)
    res = select_layouts(complete_graph(3), db, device, 5)
    assert len(res.table) == 0 and len(res.top()) == 0


def test_unscored_database_rejected(device):
    with pytest.raises(ValueError, match="attach_scores"):
        select_layouts(path_graph(3), build_database(device.coupling, "M2"), device, 1)


def test_outputs(tmp_path, device):
    db = attach_scores(build_database(device.coupling, "M2"), device)
    res = select_layouts(path_graph(3), db, device, 4)
    res.write_csv(tmp_path / "top.csv")
    res.write_timings(tmp_path / "t.json")
    lines = (tmp_path / "top.csv").read_text().splitlines()
    assert lines[1] == "0,1,2,score" and len(lines) == 6
    timings = json.loads((tmp_path / "t.json").read_text())
    assert set(timings) == {"generation_seconds", "scoring_seconds", "other_seconds"}


def test_device_file_round_trip(tmp_path, device):
    write_device(device, tmp_path / "d.txt")
    back = load_device(tmp_path / "d.txt")
    assert back.coupling == device.coupling
    np.testing.assert_array_equal(back.node_fidelity, device.node_fidelity)
    np.testing.assert_array_equal(back.edge_fidelity, device.edge_fidelity)


def test_load_device_example(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("nodes 2\nnode 0 0.99\nnode 1 0.98\nedge 0 1 0.99\n")
    d = load_device(p)
    assert d.coupling.edge_list() == [(0, 1)]
    assert d.edge_f([1], [0]).tolist() == [0.99]


@pytest.mark.parametrize("text,match", [
    ("nodes 2\nnode 0 0.99\nnode 1 0.98\nedge 0 1 1.3\n", "outside"),
    ("nodes 2\nnode 0 0.99\nedge 0 1 0.9\n", "qubit 1"),
    ("nodes 2\nnode 0 0.99\nnode 1 0\nedge 0 1 0.9\n", "outside"),
    ("node 0 0.99\n", "nodes N"),
    ("nodes 2\nnode 0 0.9\nnode 1 0.9\nedge 0 2 0.9\n", "outside 0..1"),
    ("nodes 2\nnode 0 x\n", "bad number"),
    ("nodes 2\nqubit 0 0.9\n", "unrecognised"),
])
def test_load_device_errors(tmp_path, text, match):
    p = tmp_path / "d.txt"
    p.write_text(text)
    with pytest.raises(ParseError, match=match):
        load_device(p)


def test_device_model_validation():
    g = path_graph(3)
    with pytest.raises(ValueError):
        DeviceModel(g, [0.9, 0.9], [0.9, 0.9])
    with pytest.raises(ValueError):
        DeviceModel(g, [0.9, 0.9, 1.2], [0.9, 0.9])
    with pytest.raises(ValueError):
        DeviceModel(g, [0.9] * 3, {(0, 1): 0.9})
    with pytest.raises(KeyError):
        DeviceModel(g, [0.9] * 3, [0.9, 0.9]).edge_f([0], [2])
