import warnings

import networkx as nx
import numpy as np
import pytest

from deltamotif.graph import (
    HEAVY_HEX_PRESETS,
    Graph,
    GraphError,
    ParseError,
    complete_graph,
    cycle_graph,
    erdos_renyi,
    heavy_hex,
    heavy_hex_preset,
    heavy_hex_size,
    load_graph,
    make_graph,
    path_graph,
    random_connected_subgraph,
    read_matrix_market,
    square_grid,
    write_edge_list,
)


def test_make_graph_triangle():
    g = make_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.vertex_count == 3 and g.edge_count == 3


def test_make_graph_dedups_reversed_pair():
    g = make_graph(2, [(0, 1), (1, 0)])
    assert g.edge_list() == [(0, 1)]


def test_make_graph_rejects_out_of_range():
    with pytest.raises(GraphError, match="out of range"):
        make_graph(3, [(0, 3)])


def test_make_graph_rejects_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        make_graph(3, [(1, 1)])


def test_edges_are_canonical():
    g = make_graph(4, [(3, 0), (2, 1), (0, 3), (1, 0)])
    assert g.edge_list() == [(0, 1), (0, 3), (1, 2)]
    assert not g.edges.flags.writeable


def test_has_edges_vectorised():
    g = cycle_graph(5)
    u = np.array([0, 1, 0, 4])
    v = np.array([1, 0, 2, 0])
    assert g.has_edges(u, v).tolist() == [True, True, False, True]
    assert not Graph(3).has_edges(np.array([0]), np.array([1]))[0]


@pytest.mark.parametrize("r,c", [(40, 40), (2, 2), (1, 5), (3, 7)])
def test_square_grid_counts(r, c):
    g = square_grid(r, c)
    assert g.vertex_count == r * c
    assert g.edge_count == r * (c - 1) + c * (r - 1)


def test_square_grid_40_has_3120_edges():
    assert square_grid(40, 40).edge_count == 3120


def test_square_grid_1x5_is_path():
    assert square_grid(1, 5) == path_graph(5)


def test_square_grid_edge_formula_property():
    rng = np.random.default_rng(0)
    for r, c in rng.integers(1, 65, size=(40, 2)):
        g = square_grid(int(r), int(c))
        assert g.edge_count == r * (c - 1) + c * (r - 1)


def test_square_grid_matches_networkx():
    g = square_grid(4, 6)
    ref = nx.convert_node_labels_to_integers(nx.grid_2d_graph(4, 6), ordering="sorted")
    assert nx.is_isomorphic(nx.Graph(g.edge_list()), ref)


def test_heavy_hex_single_cell_is_12_cycle():
    g = heavy_hex(1, 1)
    assert g.vertex_count == 12 and g.edge_count == 12
    assert nx.is_isomorphic(nx.Graph(g.edge_list()), nx.cycle_graph(12))


@pytest.mark.parametrize("r,c", [(1, 1), (1, 3), (2, 2), (3, 4), (5, 2)])
def test_heavy_hex_degree_bound(r, c):
    g = heavy_hex(r, c)
    assert g.max_degree() <= 3
    assert g.is_connected()
    assert g.vertex_count == heavy_hex_size(r, c)


def test_heavy_hex_multi_cell_reaches_degree_three():
    assert heavy_hex(2, 2).max_degree() == 3


def test_heavy_hex_is_subdivided_honeycomb():
    # removing degree-2 vertices (and merging their edges) gives networkx's hexagonal lattice
    for r, c in [(1, 2), (2, 3), (3, 3)]:
        g = nx.Graph(heavy_hex(r, c).edge_list())
        honey = nx.hexagonal_lattice_graph(r, c)
        assert g.number_of_nodes() == honey.number_of_nodes() + honey.number_of_edges()
        contracted = g.copy()
        # corners are numbered first, inserted vertices after them
        for v in range(honey.number_of_nodes(), g.number_of_nodes()):
            a, b = list(contracted[v])
            contracted.remove_node(v)
            contracted.add_edge(a, b)
        assert nx.is_isomorphic(contracted, honey)


def test_heavy_hex_presets():
    assert heavy_hex_preset("hh1990").vertex_count == 1990
    assert heavy_hex_preset("hh4485").vertex_count == 4485
    assert set(HEAVY_HEX_PRESETS) == {"hh1990", "hh4485"}
    with pytest.raises(GraphError):
        heavy_hex_preset("hh7")


def test_subgraph_of_k3_size_two_is_edge():
    for seed in range(5):
        s = random_connected_subgraph(complete_graph(3), 2, seed=seed)
        assert s.graph == path_graph(2)


def test_subgraph_too_large():
    with pytest.raises(GraphError):
        random_connected_subgraph(path_graph(3), 5, seed=0)


def test_subgraph_disconnected_graph_raises():
    g = make_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    with pytest.raises(GraphError):
        random_connected_subgraph(g, 4, seed=1)


@pytest.mark.parametrize("method", ["frontier", "walk"])
def test_subgraph_witness_is_embedding(method):
    g = square_grid(40, 40)
    for seed in range(5):
        s = random_connected_subgraph(g, 60, seed=seed, method=method)
        assert s.graph.vertex_count == 60
        assert s.graph.is_connected()
        assert len(set(s.witness.tolist())) == 60
        w = s.witness
        assert g.has_edges(w[s.graph.edges[:, 0]], w[s.graph.edges[:, 1]]).all()
        # induced: every grid edge among the witness vertices is in the pattern
        assert s.graph == g.subgraph(w.tolist())


def test_subgraph_deterministic():
    g = square_grid(10, 10)
    a = random_connected_subgraph(g, 15, seed=42)
    b = random_connected_subgraph(g, 15, seed=42)
    assert a.graph == b.graph and np.array_equal(a.witness, b.witness)


def test_erdos_renyi_seeded():
    assert erdos_renyi(20, 0.3, seed=1) == erdos_renyi(20, 0.3, seed=1)
    assert erdos_renyi(20, 0.0, seed=1).edge_count == 0
    assert erdos_renyi(6, 1.0, seed=1) == complete_graph(6)


def test_load_edge_list(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# a path\n0 1\n1 2\n")
    assert load_graph(p) == path_graph(3)


def test_load_edge_list_reversed_lines_identical(tmp_path):
    g = erdos_renyi(15, 0.3, seed=3)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("".join(f"{u} {v}\n" for u, v in g.edge_list()))
    b.write_text("".join(f"{v} {u}\n" for u, v in reversed(g.edge_list())))
    assert load_graph(a) == load_graph(b)


def test_load_edge_list_labels(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("q2 q0\nq0 q1\n")
    g = load_graph(p)
    assert g.labels == ("q0", "q1", "q2")
    assert g.edge_list() == [(0, 1), (0, 2)]


def test_load_edge_list_self_loop_warns(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n1 1\n")
    with pytest.warns(UserWarning, match="1 self-loops"):
        g = load_graph(p)
    assert g.edge_count == 1


def test_load_edge_list_bad_line(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n1 2 3\n")
    with pytest.raises(ParseError) as info:
        load_graph(p)
    assert info.value.lineno == 2


def test_vertices_directive_keeps_isolated(tmp_path):
    g = make_graph(5, [(0, 1)])
    p = tmp_path / "g.txt"
    write_edge_list(g, p, header="two isolated\nvertices")
    assert load_graph(p) == g


MM_K3 = """%%MatrixMarket matrix coordinate pattern symmetric
% triangle
3 3 3
2 1
3 1
3 2
"""


def test_matrix_market_k3(tmp_path):
    p = tmp_path / "k3.mtx"
    p.write_text(MM_K3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert load_graph(p) == complete_graph(3)


def test_matrix_market_diagonal_dropped(tmp_path):
    p = tmp_path / "d.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real general\n3 3 4\n1 1 2.0\n1 2 1.0\n2 1 1.0\n3 2 -1\n")
    g, diag = read_matrix_market(p)
    assert diag == 1 and g.edge_list() == [(0, 1), (1, 2)]
    with pytest.warns(UserWarning, match="1 diagonal"):
        load_graph(p)


@pytest.mark.parametrize("text,line", [
    ("%%MatrixMarket matrix array real general\n2 2\n", 1),
    ("%%MatrixMarket matrix coordinate pattern symmetric\n3 3\n", 2),
    ("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n4 1\n", 3),
    ("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\nx 1\n", 3),
])
def test_matrix_market_errors_carry_line(tmp_path, text, line):
    p = tmp_path / "bad.mtx"
    p.write_text(text)
    with pytest.raises(ParseError) as info:
        load_graph(p)
    assert info.value.lineno == line
    assert f":{line}" in str(info.value)
