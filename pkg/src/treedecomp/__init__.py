"""Tree decompositions of bipartite graphs from T-equitable colourings.

A T-equitable colouring is grouped into random rainbow stars to get a
pseudo-decomposition, whose non-isomorphic pieces are then repaired by
i-switches against isomorphic copies.
"""

from .colouring import find_equitable, synth_instance, verify_equitable
from .copies import PseudoCopy, PseudoDecomposition, degree_table, goodness
from .graph import Graph, colour_degree, edge_connectivity, load_graph
from .pipeline import PipelineConfig, decompose
from .pseudo import (
    build_pseudo_decomposition,
    check_lemma_dense,
    choose_c,
    conflict,
    conflict_global,
)
from .repair import RepairSchedule, build_matching, repair_all, repair_stage, switch_i
from .tree import LabelledTree, auto_root, incident_colours, label_tree, split
from .verify import brute_force_decompose, verify_decomposition, verify_pseudo

__all__ = [
    "Graph", "LabelledTree", "PseudoCopy", "PseudoDecomposition", "PipelineConfig", "RepairSchedule",
    "auto_root", "brute_force_decompose", "build_matching", "build_pseudo_decomposition",
    "check_lemma_dense", "choose_c", "colour_degree", "conflict", "conflict_global", "decompose",
    "degree_table", "edge_connectivity", "find_equitable", "goodness", "incident_colours",
    "label_tree", "load_graph", "repair_all", "repair_stage", "split", "switch_i",
    "synth_instance", "verify_decomposition", "verify_equitable", "verify_pseudo",
]
