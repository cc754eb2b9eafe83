from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from treezeta import generators as gen
from treezeta.graph_core import Path, enumerate_paths, make_graph, path_from_edges
from treezeta.weighted_paths import (SettingError, dirichlet_coefficients_wlit, growth_bound,
                                     growth_slope, min_star_k, n_edg, n_vert, setting_gamma_ok,
                                     star_k_wlit, star_k_wlit_brute, target_edges, unit_term,
                                     weight_classes)

from conftest import segment_graph


def test_weights_of_short_paths(segment):
    assert n_edg(segment, Path("c")) == 0
    assert n_vert(segment, Path("c")) == 1
    assert n_edg(segment, path_from_edges(segment, ["a", "ab"])) == 2
    g = make_graph(["c", "d", "e"], [("a", "ab", "c", "d", 3, 3), ("b", "bb", "d", "e", 4, 3)])
    assert n_vert(g, path_from_edges(g, ["a", "b"])) == 12


def test_star_k_examples():
    assert star_k_wlit(segment_graph(3, 3), 1)
    assert not star_k_wlit(segment_graph(2, 2), 2)
    assert star_k_wlit(segment_graph(3, 2), 2)


def test_star_k_refuses_weight_one():
    with pytest.raises(SettingError):
        star_k_wlit(segment_graph(1, 3), 1)


def test_setting_gamma():
    assert not setting_gamma_ok(segment_graph(2, 2))
    assert setting_gamma_ok(segment_graph(2, 3))
    assert not setting_gamma_ok(segment_graph(1, 3))


def test_coefficients_segment(segment):
    t = dirichlet_coefficients_wlit(segment, "c", "c", 20)
    assert t.a.get(3, 0) == 0
    assert t.a[6] == 1
    assert t.a[1] == 1
    assert all(t.b[n] == n * t.a[n] for n in t.a)


def test_coefficients_refuse_bad_setting():
    with pytest.raises(SettingError):
        dirichlet_coefficients_wlit(segment_graph(2, 2), "c", "c", 10)


def _brute_classes(g, u, w, L):
    out = Counter()
    unit = unit_term(g, u, w)
    if unit:
        out[1] += unit
    targets = target_edges(g, w)
    if g.is_vertex(u):
        for p in enumerate_paths(g, u, L):
            if p.edges and p.edges[-1] in targets:
                out[n_vert(g, p)] += 1
    else:
        for first in (u, g.inverse[u]):
            for p in enumerate_paths(g, g.origin[first], L):
                if len(p) >= 2 and p.edges[0] == first and p.edges[-1] in targets:
                    out[n_edg(g, p)] += 1
    return {n: c for n, c in out.items() if n}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 5))
def test_grouped_enumeration_matches_listing(seed, pairs, L):
    rng = gen.instance_rng(seed, 0, "wp")
    g = gen.random_spec(rng, pairs).build()
    sites = list(g.vertices) + list(g.edges)
    u, w = rng.choice(sites), rng.choice(sites)
    assert weight_classes(g, u, w, max_len=L) == _brute_classes(g, u, w, L)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 4))
def test_star_frontier_matches_brute(seed, pairs, k):
    g = gen.random_spec(gen.instance_rng(seed, 0, "star"), pairs, lo=2, hi=3).build()
    assert star_k_wlit(g, k) == star_k_wlit_brute(g, k)


def test_min_star_k(segment):
    assert min_star_k(segment) == 1
    assert min_star_k(segment_graph(3, 2)) == 2
    assert min_star_k(segment_graph(2, 2)) is None


def test_growth_slope_bounded():
    g = segment_graph(3, 2)
    t = dirichlet_coefficients_wlit(g, "c", "c", 2000)
    assert growth_slope(t) <= growth_bound(g) + 0.2
