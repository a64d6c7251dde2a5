import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import decomposable_by_partitions, is_tree_copy
from test_colouring import SMALL_TREES, tree_args
from test_graph import bipartite_pairs
from treedecomp.colouring import synth_instance
from treedecomp.copies import PseudoCopy
from treedecomp.errors import BudgetExhausted, ParameterOutOfRange
from treedecomp.graph import load_graph
from treedecomp.tree import label_tree
from treedecomp.verify import brute_force_decompose, embeddings_through, verify_decomposition, verify_pseudo

P4 = label_tree([("a", "b"), ("b", "c"), ("c", "d")], "a")


def kinds(vs):
    return {v.kind for v in vs}


def test_planted_copies_pass(p5_end):
    inst = synth_instance(p5_end, 8, 10, 10, seed=1)
    for h in inst.planted:
        assert verify_pseudo(inst.graph, p5_end, h, inst.colouring) == []
    assert verify_decomposition(inst.graph, p5_end, inst.planted, inst.colouring) == []


def test_pseudo_violations(c4, p3_centre):
    a1, b1, b2 = c4.index["a1"], c4.index["b1"], c4.index["b2"]
    k = c4.edge_id[(a1, b1)]
    twice = PseudoCopy((a1, b1, b1), (k, k))
    assert "NotInjective" in kinds(verify_pseudo(c4, p3_centre, twice))
    flipped = PseudoCopy((b1, a1, c4.index["a2"]), (k, c4.edge_id[(b1, c4.index["a2"])]))
    assert "WrongBipartition" in kinds(verify_pseudo(c4, p3_centre, flipped))
    wrong_edge = PseudoCopy((a1, b1, b2), (c4.edge_id[(a1, b2)], c4.edge_id[(a1, b1)]))
    assert "NotHomomorphism" in kinds(verify_pseudo(c4, p3_centre, wrong_edge))
    good = PseudoCopy((a1, b1, b2), (c4.edge_id[(a1, b1)], c4.edge_id[(a1, b2)]))
    assert verify_pseudo(c4, p3_centre, good, (1, 2, 2, 1)) == []
    assert "ColourMismatch" in kinds(verify_pseudo(c4, p3_centre, good, (2, 1, 1, 2)))


def c4_paths(c4):
    ids = c4.index
    return [
        PseudoCopy((ids["a1"], ids["b1"], ids["b2"]), (c4.edge_id[(ids["a1"], ids["b1"])], c4.edge_id[(ids["a1"], ids["b2"])])),
        PseudoCopy((ids["a2"], ids["b2"], ids["b1"]), (c4.edge_id[(ids["a2"], ids["b2"])], c4.edge_id[(ids["a2"], ids["b1"])])),
    ]


def test_decomposition_checks(c4, p3_centre, p5_end):
    hs = c4_paths(c4)
    assert verify_decomposition(c4, p3_centre, hs) == []
    assert "NotPartition" in kinds(verify_decomposition(c4, p3_centre, [hs[0], hs[0]]))
    assert "NotPartition" in kinds(verify_decomposition(c4, p3_centre, hs[:1]))
    cyc = load_graph([("b1", "a1"), ("a1", "b2"), ("b2", "a2"), ("a2", "b1")], {"a1": "A"})
    ids = [cyc.index[x] for x in ("b1", "a1", "b2", "a2", "b1")]
    h = PseudoCopy(tuple(ids), tuple(cyc.edge_id[(ids[i], ids[i - 1])] for i in range(1, 5)))
    assert verify_pseudo(cyc, p5_end, h) == []
    out = verify_decomposition(cyc, p5_end, [h])
    assert [v.kind for v in out] == ["NotInjective"]
    assert out[0].record()["copy"] == "0"


def test_oracle_examples():
    c6 = load_graph([(f"v{k}", f"v{(k + 1) % 6}") for k in range(6)])
    t3 = label_tree([("a", "b"), ("b", "c"), ("c", "d")], "a")
    res = brute_force_decompose(c6, t3)
    assert res is not None and len(res) == 2
    assert verify_decomposition(c6, t3, res) == []
    k13 = load_graph([("c", "x"), ("c", "y"), ("c", "z")])
    assert brute_force_decompose(k13, SMALL_TREES[1]) is None
    one = synth_instance(t3, 1, 3, 3, seed=0)
    res = brute_force_decompose(one.graph, t3)
    assert [sorted(h.edges) for h in res] == [[0, 1, 2]]
    assert brute_force_decompose(load_graph([], {"a": "A"}), t3) == []


def test_oracle_limits():
    big = load_graph([(f"a{i}", f"b{j}") for i in range(5) for j in range(5)])
    with pytest.raises(ParameterOutOfRange):
        brute_force_decompose(big, SMALL_TREES[0])
    k34 = load_graph([(f"a{i}", f"b{j}") for i in range(3) for j in range(4)])
    with pytest.raises(BudgetExhausted):
        brute_force_decompose(k34, SMALL_TREES[4], node_budget=2)


@settings(max_examples=60, deadline=None)
@given(bipartite_pairs(max_side=3), st.sampled_from(range(len(SMALL_TREES))))
def test_embeddings_match_definition(pairs, which):
    t = SMALL_TREES[which]
    g = load_graph(pairs)
    side, tedges = tree_args(t)
    for k in range(g.size):
        got = {frozenset(h.edges) for h in embeddings_through(g, t, k)}
        want = set()
        for combo in itertools.combinations(range(g.size), t.m):
            if k in combo and is_tree_copy([g.edges[e] for e in combo], list(g.side), side, tedges):
                want.add(frozenset(combo))
        assert got == want
        for h in embeddings_through(g, t, k):
            assert verify_pseudo(g, t, h) == [] and h.is_isomorphic()


@settings(max_examples=60, deadline=None)
@given(bipartite_pairs(max_side=3).filter(lambda p: len(p) <= 8), st.sampled_from(range(len(SMALL_TREES))))
def test_oracle_matches_partition_enumeration(pairs, which):
    t = SMALL_TREES[which]
    g = load_graph(pairs)
    side, tedges = tree_args(t)
    res = brute_force_decompose(g, t)
    assert (res is not None) == decomposable_by_partitions(list(g.side), list(g.edges), side, tedges)
    if res is not None:
        assert verify_decomposition(g, t, res) == []
