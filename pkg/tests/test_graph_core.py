import pytest
from hypothesis import given, settings, strategies as st

from treezeta import generators as gen
from treezeta.graph_core import (GraphError, Path, enumerate_paths, fundamental_cycles, has_long_cycle,
                                 is_reduced, make_graph, oriented_spanning, path_compose, path_end,
                                 path_from_edges, path_reverse, spanning_tree, validate_graph)


def _raw(edges, vertices=("c", "d")):
    return {"vertices": list(vertices), "edges": edges}


def _edge(name, o, t, inv, w):
    return {"name": name, "origin": o, "terminus": t, "inverse": inv, "weight": w}


def test_valid_segment():
    g = validate_graph(_raw([_edge("a", "c", "d", "ab", 3), _edge("ab", "d", "c", "a", 3)]))
    assert len(g.vertices) == 2 and len(g.edges) == 2
    assert g.terminus("a") == "d" and g.bar("a") == "ab"


def test_fixed_point_inversion_rejected():
    with pytest.raises(GraphError, match="fixed-point"):
        validate_graph(_raw([_edge("a", "c", "c", "a", 3)], ["c"]))


def test_disconnected_rejected():
    edges = [_edge("a", "c", "d", "ab", 3), _edge("ab", "d", "c", "a", 3),
             _edge("b", "e", "f", "bb", 3), _edge("bb", "f", "e", "b", 3)]
    with pytest.raises(GraphError, match="disconnected"):
        validate_graph(_raw(edges, ["c", "d", "e", "f"]))


def test_terminus_mismatch_rejected():
    with pytest.raises(GraphError):
        validate_graph(_raw([_edge("a", "c", "d", "ab", 3), _edge("ab", "d", "d", "a", 3)]))


def test_roundtrip_raw(segment):
    assert validate_graph(segment.to_raw()) == segment


def test_compose_and_reverse(segment):
    o = Path("c")
    q = path_from_edges(segment, ["a", "ab"])
    assert path_compose(segment, o, q) == q
    p = path_compose(segment, path_from_edges(segment, ["a"]), path_from_edges(segment, ["ab"]))
    assert p.edges == ("a", "ab") and len(p) == 2
    assert path_reverse(segment, path_from_edges(segment, ["a"])).edges == ("ab",)
    assert path_end(segment, p) == "c"


def test_compose_mismatch(segment):
    with pytest.raises(GraphError):
        path_compose(segment, path_from_edges(segment, ["a"]), path_from_edges(segment, ["a"]))


def test_reverse_two_edges():
    g = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 3, 3)])
    assert path_reverse(g, path_from_edges(g, ["a", "b"])).edges == ("bb", "ab")


def test_reducedness(segment):
    assert not is_reduced(segment, path_from_edges(segment, ["a", "ab"]))
    assert is_reduced(segment, Path("c"))


def test_enumeration_segment(segment):
    def edges_of(L):
        return {p.edges for p in enumerate_paths(segment, "c", L)}
    assert edges_of(0) == {()}
    assert edges_of(1) == {(), ("a",)}
    assert edges_of(2) == {(), ("a",), ("a", "ab")}


def test_cycles():
    tree = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 3, 3)])
    assert fundamental_cycles(tree) == []
    loop = make_graph(["c"], [("a", "ab", "c", "c", 3, 3)])
    cyc = fundamental_cycles(loop)
    assert len(cyc) == 1 and len(cyc[0]) == 1
    seg_loop = make_graph(["c", "d"], [("a", "ab", "c", "d", 3, 3), ("l", "lb", "d", "d", 3, 3)])
    assert len(fundamental_cycles(seg_loop)) == 1


def test_long_cycles():
    tri = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 3, 3),
                                       ("x", "xb", "e", "c", 3, 3)])
    assert has_long_cycle(tri)
    bouquet = make_graph(["c"], [("a", "ab", "c", "c", 3, 3), ("b", "bb", "c", "c", 3, 3)])
    assert not has_long_cycle(bouquet)
    tree = make_graph(["c", "d"], [("a", "ab", "c", "d", 3, 3)])
    assert not has_long_cycle(tree)


def test_orientation_segment(segment):
    lam, orient = oriented_spanning(segment, "c")
    assert set(lam.edges) == {"a", "ab"}
    assert orient.positive == {"ab"}


def test_orientation_bouquet():
    g = make_graph(["c"], [("a", "ab", "c", "c", 3, 3), ("b", "bb", "c", "c", 3, 4)])
    lam, orient = oriented_spanning(g, "c")
    assert lam.vertices == ("c",) and lam.edges == ()
    assert len(orient.positive) == 2


def test_orientation_path_middle():
    g = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 3, 3)])
    _, orient = oriented_spanning(g, "d")
    tree_pos = {e for e in orient.positive if e in ("a", "ab", "b", "bb")}
    assert {g.origin[e] for e in tree_pos} == {"c", "e"}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_spanning_tree_size(seed, pairs):
    g = gen.random_spec(gen.instance_rng(seed, 0, "prop"), pairs).build()
    tree, _ = spanning_tree(g)
    assert len(tree) == 2 * (len(g.vertices) - 1)
    assert len(fundamental_cycles(g)) == len(g.edge_pairs()) - (len(g.vertices) - 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(0, 4))
def test_reverse_involutive(seed, pairs, L):
    g = gen.random_spec(gen.instance_rng(seed, 0, "prop"), pairs).build()
    for p in enumerate_paths(g, g.vertices[0], L):
        q = path_reverse(g, p)
        assert path_reverse(g, q) == p
        assert is_reduced(g, p) == is_reduced(g, q)
