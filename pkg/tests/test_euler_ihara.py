from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treezeta import generators as gen
from treezeta.euler_ihara import (NotUnimodular, chi_at, chi_vertex, ihara_reciprocal, is_unimodular,
                                  transition_weight, verify_chi_relations, verify_chi_reciprocal,
                                  verify_ihara_ratio)
from treezeta.graph_core import cut_splits, make_graph
from treezeta.zeta_wlit import HypothesisError, zeta_reciprocal

from conftest import loop_graph, segment_graph


def test_unimodular_examples():
    tree = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 5), ("b", "bb", "d", "e", 2, 4)])
    assert is_unimodular(tree)
    assert not is_unimodular(loop_graph(3, 4))
    assert is_unimodular(loop_graph(4, 4))


def test_chi_requires_unimodular():
    with pytest.raises(NotUnimodular):
        chi_at(loop_graph(3, 4), "c")


def test_chi_segment_matches_reciprocal(segment):
    assert chi_at(segment, "c") == -1
    assert chi_at(segment, "a") == Fraction(-1, 3)
    assert chi_at(segment, "c") == zeta_reciprocal(segment, "c", -1)


def test_chi_tree_root_independent():
    g = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 5), ("l", "lb", "d", "d", 3, 3),
                                     ("b", "bb", "d", "e", 4, 2)])
    vals = {chi_vertex(g, "c", r) for r in g.vertices}
    assert len(vals) == 1


def test_chi_transport_segment_loop():
    g = make_graph(["c", "d"], [("a", "ab", "c", "d", 3, 4), ("l", "lb", "d", "d", 3, 3)])
    checks = verify_chi_relations(g)
    assert checks and all(c.ok for c in checks)
    # N_vert(a) / N_vert(ā) = 3/4
    assert chi_at(g, "c") == Fraction(3, 4) * chi_at(g, "d")


def test_chi_additive_bouquet():
    g = make_graph(["c"], [("a", "ab", "c", "c", 3, 3), ("b", "bb", "c", "c", 4, 4)])
    splits = cut_splits(g, "c")
    assert splits
    for g1, g2 in splits:
        assert chi_at(g, "c") == chi_at(g1, "c") + chi_at(g2, "c") - 1


def test_ihara_examples(segment):
    t = transition_weight(segment)
    assert ihara_reciprocal(t, 0) == 1
    assert ihara_reciprocal(t, 1) == -3
    assert abs(ihara_reciprocal(t, 0.5) - (1 - 0.25 * 4)) < 1e-12


def test_chi_reciprocal_segment_loop():
    g = make_graph(["c", "d"], [("a", "ab", "c", "d", 3, 4), ("l", "lb", "d", "d", 3, 3)])
    checks = verify_chi_reciprocal(g)
    assert all(c.ok for c in checks)


def test_chi_reciprocal_refuses_long_cycle():
    tri = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 3, 3),
                                       ("x", "xb", "e", "c", 3, 3)])
    with pytest.raises(HypothesisError):
        verify_chi_reciprocal(tri)


def test_ihara_ratio_path():
    g = make_graph(["c", "d", "e", "f"], [("x", "xb", "e", "c", 3, 2), ("a", "ab", "c", "d", 3, 3),
                                          ("y", "yb", "d", "f", 2, 3)])
    g1 = g.subgraph(["e", "c", "d"], ["x", "xb", "a", "ab"])
    g2 = g.subgraph(["c", "d", "f"], ["a", "ab", "y", "yb"])
    res = verify_ihara_ratio(g, g1, g2, "a")
    assert res.lhs == res.rhs
    assert res.chi_lhs == res.chi_rhs


def test_ihara_ratio_degenerate():
    g = segment_graph(3, 4)
    res = verify_ihara_ratio(g, g, g, "a")
    assert res.lhs == res.rhs


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_chi_reciprocal_random(seed):
    g = gen.unimodular_tree_with_loops(gen.instance_rng(seed, 0, "pE"), 4)
    assert all(c.ok for c in verify_chi_reciprocal(g))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_ihara_ratio_random(seed):
    g, g1, g2, a = gen.segment_join_instance(gen.instance_rng(seed, 0, "pG"), 5)
    res = verify_ihara_ratio(g, g1, g2, a)
    assert res.lhs == res.rhs and res.chi_lhs == res.chi_rhs
