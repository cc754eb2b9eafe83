from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treezeta import generators as gen
from treezeta.graph_core import make_graph
from treezeta.lad import (ROOT, DiagramError, bass_F, build_truncated_tree, condition_diamond,
                          cyclic_diagram, enumerate_reduced_delta_paths, full_symmetric_diagram,
                          lad_to_raw, load_lad, oracle_check_tree, setting_pclosed_ok, site_pairs,
                          sl2_diagram, star_k_pclosed, star_k_pclosed_brute, validate_lad, weight_W,
                          weight_W_rev, wlit_companion, wlit_site, zeta_pclosed, zeta_pclosed_series)
from treezeta.zeta_wlit import zeta_det, zeta_series

from conftest import DATA, loop_graph, segment_graph


def _segment_raw(group_c):
    return {
        "vertices": ["c", "d"],
        "edges": [
            {"name": "a", "origin": "c", "terminus": "d", "inverse": "ab", "colors": ["x0", "x1", "x2"]},
            {"name": "ab", "origin": "d", "terminus": "c", "inverse": "a", "colors": ["y0", "y1", "y2"]},
        ],
        "groups": {"c": group_c, "d": "full"},
    }


def test_full_symmetric_valid(segment):
    d = full_symmetric_diagram(segment)
    assert all(condition_diamond(d, c) for c in segment.vertices)
    again = validate_lad(lad_to_raw(d))
    assert again.graph == segment


def test_orbit_mismatch_rejected():
    with pytest.raises(DiagramError, match="orbit"):
        validate_lad(_segment_raw({"generators": [{"x0": "x1", "x1": "x0"}]}))


def test_json_group_forms():
    d = validate_lad(_segment_raw({"generators": [{"x0": "x1", "x1": "x2", "x2": "x0"}]}))
    assert d.groups["c"].order() == 3
    assert d.groups["d"].order() == 6


def test_sl2_diagram_valid():
    d = sl2_diagram(3)
    assert d.graph.weight["a"] == 4
    assert all(condition_diamond(d, c) for c in ("c", "d"))
    assert star_k_pclosed(d, d.iota(), 1)


def test_sl2_data_file():
    d = load_lad(str(DATA / "sl2_p3.lad.json"))
    assert d.groups["c"].order() == 12
    assert zeta_pclosed(d, d.iota(), "c", "a:0", "a", 2).value == Fraction(5, 4)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_cyclic_fails_diamond(n):
    d = cyclic_diagram(loop_graph(n, n))
    assert not condition_diamond(d, "c")


def test_weights_full_symmetric():
    g = make_graph(["c", "d"], [("a", "ab", "c", "d", 4, 3)])
    d = full_symmetric_diagram(g)
    iota = d.iota()
    x = d.colors["a"][0]
    back = iota[x]
    others = [y for y in d.colors["ab"] if y != back]
    assert weight_W(d, iota, x, others[0]) == 2
    assert weight_W(d, iota, x, back) == 1
    # t(a) = d, but a leaves c
    assert weight_W(d, iota, x, d.colors["a"][1]) == 0
    assert weight_W_rev(d, d.colors["a"][0], d.colors["a"][1]) == 3


def test_sl2_weights():
    d = sl2_diagram(5)
    iota = d.iota()
    x = d.colors["a"][0]
    assert {weight_W(d, iota, x, y) for y in d.colors["ab"] if y != iota[x]} == {5}


def test_delta_paths_zero_length(segment):
    d = full_symmetric_diagram(segment)
    paths = list(enumerate_reduced_delta_paths(d, d.iota(), "c", 0))
    assert len(paths) == 1 and paths[0].colors == () and paths[0].anchor == "c"


def test_F_at_zero_is_composability(segment):
    d = full_symmetric_diagram(segment)
    f = bass_F(d, d.iota(), 0)
    assert {x for r in f.rows for x in r} <= {0, 1}
    iota = d.iota()
    for i, x in enumerate(d.order):
        for j, y in enumerate(d.order):
            ok = segment.terminus(d.edge_of[x]) == segment.origin[d.edge_of[y]] and y != iota[x]
            assert f[i, j] == int(ok)


def test_star_k_examples():
    d = full_symmetric_diagram(segment_graph(3, 2))
    assert star_k_pclosed(d, d.iota(), 2)
    d2 = full_symmetric_diagram(segment_graph(2, 2))
    for k in (1, 2, 3):
        assert not star_k_pclosed(d2, d2.iota(), k)
    assert not setting_pclosed_ok(d2)


def test_series_matches_wlit_series(segment):
    d = full_symmetric_diagram(segment)
    assert zeta_pclosed_series(d, d.iota(), "c", ROOT, "c", 2, 0) == 1
    for L in range(6):
        assert zeta_pclosed_series(d, d.iota(), "c", ROOT, "c", 2, L) == zeta_series(segment, "c", "c", 2, L)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_sl2_closed_forms(p):
    d = sl2_diagram(p)
    for s in (2, 3):
        q = Fraction(1, p ** s)
        q1 = Fraction(1, (p + 1) ** s)
        assert zeta_pclosed(d, d.iota(), "c", "a:0", "a", s).value == (1 + q) / (1 - q)
        assert zeta_pclosed(d, d.iota(), "c", ROOT, "c", s).value == (1 + (q1 - q) * q) / (1 - q * q)


def test_full_symmetric_matches_wlit(segment):
    d = full_symmetric_diagram(segment)
    for r, u in site_pairs(d, "c"):
        for s in (2, 3):
            assert zeta_pclosed(d, d.iota(), "c", r, u, s).value == zeta_det(segment, wlit_site(d, "c", r), u, s).value


def test_companion_of_full_is_full(segment):
    d = full_symmetric_diagram(segment)
    comp = wlit_companion(d)
    assert all(comp.groups[c].order() == d.groups[c].order() for c in segment.vertices)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_star_frontier_matches_brute(seed, k):
    d = gen.random_diagram(gen.instance_rng(seed, 0, "lstar"), max_pairs=2, lo=2, hi=3)
    assert star_k_pclosed(d, d.iota(), k) == star_k_pclosed_brute(d, d.iota(), k)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_tree_oracle_small(seed):
    rng = gen.instance_rng(seed, 0, "ltree")
    d = gen.random_diagram(rng, max_pairs=2, lo=2, hi=3)
    c0 = d.graph.vertices[0]
    rep = oracle_check_tree(build_truncated_tree(d, d.iota(), c0, 3))
    assert rep.ok, rep.failures[:3]
