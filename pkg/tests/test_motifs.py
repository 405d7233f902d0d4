import re

import networkx as nx
import pytest

from deltamotif.graph import Graph, cycle_graph, load_graph, make_graph, write_edge_list
from deltamotif.motifs import (
    MotifError,
    MotifSet,
    builtin_motif,
    catalog_names,
    custom_motif,
    default_motif_set,
    motif_set,
)


def test_m2_is_single_edge():
    m = builtin_motif("M2")
    assert m.size == 2 and m.template.edge_count == 1


def test_m4_o_is_four_cycle():
    m = builtin_motif("M4-O")
    assert m.template.edge_count == 4
    assert m.template == cycle_graph(4)


def test_m3_o_is_triangle():
    assert nx.is_isomorphic(nx.Graph(builtin_motif("M3-O").template.edge_list()), nx.complete_graph(3))


def test_unknown_motif_lists_catalog():
    with pytest.raises(MotifError, match="M4-O"):
        builtin_motif("M99")


@pytest.mark.parametrize("name", catalog_names())
def test_naming_convention(name):
    m = builtin_motif(name)
    t = nx.Graph(m.template.edge_list())
    assert nx.is_connected(t) and m.size >= 2
    plain = re.fullmatch(r"M(\d+)", name)
    cyc = re.fullmatch(r"M(\d+)-O", name)
    if plain:
        k = int(plain.group(1))
        assert nx.is_isomorphic(t, nx.path_graph(k))
    elif cyc:
        k = int(cyc.group(1))
        assert nx.is_isomorphic(t, nx.cycle_graph(k))


def test_branched_templates():
    star = builtin_motif("M4-1").template
    assert sorted(star.degree().tolist()) == [1, 1, 1, 3]
    dom = builtin_motif("M6-2O").template
    assert dom.vertex_count == 6 and dom.edge_count == 7
    hexleg = builtin_motif("M18-O-6").template
    assert hexleg.vertex_count == 18 and hexleg.edge_count == 18
    assert sorted(hexleg.degree().tolist()) == [1] * 6 + [2] * 6 + [3] * 6


def test_catalog_contains_required_names():
    names = set(catalog_names())
    for n in ["M2", "M3", "M9", "M3-O", "M4-O", "M6-O", "M12-O", "M4-1", "M6-2O", "M18-O-6"]:
        assert n in names


@pytest.mark.parametrize("topology,expected", [
    ("heavy-hex", ["M4", "M2"]),
    ("square-grid", ["M6-O", "M4-O", "M2"]),
    ("generic", ["M3", "M2"]),
])
def test_default_motif_sets(topology, expected):
    ms = default_motif_set(topology)
    assert ms.names == expected
    sizes = [m.size for m in ms]
    assert sizes == sorted(sizes, reverse=True)


def test_default_motif_set_unknown():
    with pytest.raises(MotifError):
        default_motif_set("torus")


def test_custom_star():
    m = custom_motif("star4", Graph(4, [(0, 1), (0, 2), (0, 3)]))
    assert m.size == 4


def test_custom_disconnected_rejected():
    with pytest.raises(MotifError, match="disconnected"):
        custom_motif("bad", Graph(4, [(0, 1), (2, 3)]))


def test_custom_alias_distinct_by_name():
    alt = custom_motif("M4-O-alt", cycle_graph(4))
    assert alt.template == builtin_motif("M4-O").template
    assert alt != builtin_motif("M4-O")
    ms = MotifSet([alt, "M4-O", "M2"])
    assert len(ms) == 3


def test_motif_set_requires_m2_and_unique():
    with pytest.raises(MotifError):
        MotifSet(["M4"])
    with pytest.raises(MotifError):
        MotifSet(["M2", "M2"])


def test_motif_set_string_adds_m2_and_orders():
    ms = motif_set("M4-O, M6-O")
    assert ms.names == ["M6-O", "M4-O", "M2"]
    assert ms.get("M4-O").size == 4
    with pytest.raises(KeyError):
        ms.get("M3")


def test_ties_broken_by_name():
    assert motif_set("M4-O,M4,M4-1").names == ["M4", "M4-1", "M4-O", "M2"]


def test_template_export_round_trip(tmp_path):
    m = builtin_motif("M18-O-6")
    p = tmp_path / "m.txt"
    write_edge_list(m.template, p)
    assert load_graph(p) == m.template
