import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_equitable, equitable_by_definition
from test_graph import bipartite_pairs
from treedecomp.colouring import (
    EquitableViolation,
    compatible,
    find_equitable,
    is_equitable,
    synth_instance,
    verify_equitable,
)
from treedecomp.errors import BudgetExhausted, EmbeddingFailed, UncolouredEdge
from treedecomp.graph import load_graph
from treedecomp.tree import label_tree

SMALL_TREES = [
    label_tree([("u", "v")], "u"),
    label_tree([("x", "c"), ("c", "y")], "c"),
    label_tree([("u", "v"), ("v", "w")], "u", "B"),
    label_tree([("a", "b"), ("b", "c"), ("c", "d")], "a"),
    label_tree([("c", "x"), ("c", "y"), ("c", "z")], "c"),
]


def tree_args(t):
    return list(t.side), [t.edge(i) for i in range(1, t.m + 1)]


def test_compatibility(c4, p3_leaf):
    a1, b1 = c4.index["a1"], c4.index["b1"]
    assert compatible(c4, p3_leaf, a1, 1)
    assert not compatible(c4, p3_leaf, a1, 0)
    assert compatible(c4, p3_leaf, b1, 2)


def test_alternating_c4_is_equitable(c4, p3_centre):
    # edges: a1b1, a1b2, a2b1, a2b2
    assert verify_equitable(c4, p3_centre, (1, 2, 2, 1)) == []
    assert is_equitable(c4, p3_centre, (2, 1, 1, 2))


def test_both_edges_at_a1_same_colour(c4, p3_leaf):
    out = verify_equitable(c4, p3_leaf, (1, 1, 2, 2))
    a1, a2 = c4.index["a1"], c4.index["a2"]
    assert EquitableViolation(a1, 1, 1, 2, 2, 0) in out
    assert EquitableViolation(a2, 1, 1, 2, 0, 2) in out
    assert len(out) == 2


def test_empty_graph_ok(p3_centre):
    g = load_graph([], {"a": "A"})
    assert verify_equitable(g, p3_centre, ()) == []


def test_uncoloured_edge(c4, p3_centre):
    with pytest.raises(UncolouredEdge):
        verify_equitable(c4, p3_centre, (1, 2, None, 1))


def test_find_on_c4(c4, p3_centre):
    col = find_equitable(c4, p3_centre)
    assert col is not None and is_equitable(c4, p3_centre, col)
    side, tedges = tree_args(p3_centre)
    passing = all_equitable(list(c4.side), list(c4.edges), side, tedges)
    assert col in passing
    # only A-vertices face |S(t)| = 2, so 4 of the 16 colourings pass
    assert len(passing) == 4


def test_single_edge_unsat(p3_centre):
    g = load_graph([("a", "b")])
    assert find_equitable(g, p3_centre) is None


def test_single_edge_tree():
    t = SMALL_TREES[0]
    assert find_equitable(load_graph([("a", "b")]), t) == (1,)


def test_budget_exhausted():
    pairs = [(f"a{i}", f"b{j}") for i in range(4) for j in range(4)]
    t = SMALL_TREES[4]
    with pytest.raises(BudgetExhausted):
        find_equitable(load_graph(pairs), t, budget=3)


@settings(max_examples=60, deadline=None)
@given(bipartite_pairs(max_side=4).filter(lambda p: len(p) <= 7), st.sampled_from(range(len(SMALL_TREES))))
def test_find_matches_enumeration(pairs, which):
    t = SMALL_TREES[which]
    g = load_graph(pairs)
    side, tedges = tree_args(t)
    col = find_equitable(g, t)
    if col is None:
        assert all_equitable(list(g.side), list(g.edges), side, tedges) == []
    else:
        assert equitable_by_definition(list(g.side), list(g.edges), side, tedges, col)
        assert is_equitable(g, t, col)


@given(bipartite_pairs(max_side=4), st.randoms(use_true_random=False))
def test_verify_agrees_with_definition(pairs, rnd):
    g = load_graph(pairs)
    for t in SMALL_TREES:
        col = tuple(rnd.randint(1, t.m) for _ in range(g.size))
        side, tedges = tree_args(t)
        assert is_equitable(g, t, col) == equitable_by_definition(list(g.side), list(g.edges), side, tedges, col)


@given(bipartite_pairs(max_side=4), st.randoms(use_true_random=False))
def test_swapping_path_colours_preserves_status(pairs, rnd):
    g = load_graph(pairs)
    t = SMALL_TREES[1]
    col = tuple(rnd.randint(1, 2) for _ in range(g.size))
    swapped = tuple(3 - c for c in col)
    assert is_equitable(g, t, col) == is_equitable(g, t, swapped)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 30), st.sampled_from(range(len(SMALL_TREES))))
def test_synth_always_equitable(seed, copies, which):
    t = SMALL_TREES[which]
    inst = synth_instance(t, copies, 12, 12, seed)
    assert inst.graph.size == copies * t.m
    assert is_equitable(inst.graph, t, inst.colouring)
    covered = sorted(k for h in inst.planted for k in h.edges)
    assert covered == list(range(inst.graph.size))


def test_synth_small_cases(p3_centre):
    inst = synth_instance(p3_centre, 2, 2, 2, seed=5)
    assert inst.graph.size == 4 and is_equitable(inst.graph, p3_centre, inst.colouring)
    one = synth_instance(p3_centre, 1, 3, 3, seed=1)
    assert one.graph.n == 3 and one.colouring == (1, 2)
    assert one.planted[0].is_isomorphic()
    with pytest.raises(ValueError):
        synth_instance(p3_centre, 0, 2, 2, seed=0)
    with pytest.raises(EmbeddingFailed):
        synth_instance(p3_centre, 5, 2, 2, seed=0)
