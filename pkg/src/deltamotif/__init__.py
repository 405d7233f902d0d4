"""Subgraph isomorphism enumeration by motif decomposition and relational joins.

Typical use::

    from deltamotif import square_grid, random_connected_subgraph, build_database, delta_motif

    data = square_grid(20, 20)
    pattern = random_connected_subgraph(data, 12, seed=3).graph
    db = build_database(data, "M4-O,M2")
    matches = delta_motif(pattern, db)
"""

from .decompose import Decomposition, DecompositionError, Slice, ValidationReport, decompose, validate
from .engine import (
    DatabaseError,
    FingerprintMismatch,
    MatchResult,
    MotifDatabase,
    build_database,
    count_matches,
    delta_motif,
    execute,
    fingerprint,
    load_database,
    save_database,
)
from .graph import (
    Graph,
    GraphError,
    ParseError,
    complete_graph,
    cycle_graph,
    erdos_renyi,
    heavy_hex,
    heavy_hex_preset,
    load_graph,
    make_graph,
    path_graph,
    random_connected_subgraph,
    read_matrix_market,
    square_grid,
    write_edge_list,
)
from .layout import DeviceModel, ScoredLayouts, attach_scores, load_device, random_device, select_layouts
from .motifs import Motif, MotifError, MotifSet, builtin_motif, custom_motif, default_motif_set, motif_set
from .table import (
    EmbeddingTable,
    JoinConstraint,
    MemoryBudgetError,
    inner_join,
    read_binary,
    read_csv,
    sort_rows,
    write_binary,
    write_csv,
)
from .vf2 import automorphisms, vf2_enumerate, vf2_first

__version__ = "0.1.0"
