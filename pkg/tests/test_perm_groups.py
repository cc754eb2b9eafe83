import pytest
from hypothesis import given, settings, strategies as st

from treezeta.perm_groups import (GroupError, Permutation, PermGroup, closure, cyclic_generators,
                                  dihedral_generators, projective_line, psl2_generators,
                                  symmetric_generators)


def test_trivial_group():
    g = PermGroup(["x", "y", "z"])
    assert g.order() == 1
    assert sorted(map(sorted, g.orbits())) == [["x"], ["y"], ["z"]]


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_cycle_order(n):
    pts = [f"p{i}" for i in range(n)]
    g = closure(pts, cyclic_generators(pts))
    assert g.order() == n
    assert len(g.orbits()) == 1


def test_cycle_on_four_points_single_orbit():
    pts = list("wxyz")
    assert PermGroup(pts, cyclic_generators(pts)).orbit("w") == frozenset(pts)


def test_symmetric_one_orbit():
    pts = list("abcd")
    g = PermGroup(pts, symmetric_generators(pts))
    assert g.order() == 24
    assert g.orbits() == [frozenset(pts)]
    assert g.stab_orbit_size("a", "a") == 1
    assert g.stab_orbit_size("a", "b") == 3


def test_dihedral_order():
    pts = [str(i) for i in range(5)]
    assert PermGroup(pts, dihedral_generators(pts)).order() == 10


def test_psl2_f5_order():
    pts = projective_line(5)
    assert closure(pts, psl2_generators(5)).order() == 60


@pytest.mark.parametrize("p", [3, 5])
def test_psl2_stabilizer_orbits(p):
    pts = projective_line(p)
    g = PermGroup(pts, psl2_generators(p))
    for x in pts:
        for y in pts:
            want = 1 if x == y else p
            assert g.stab_orbit_size(x, y) == want
            assert g.stab_orbit_size_brute(x, y) == want


def test_bad_generator_rejected():
    with pytest.raises(GroupError):
        PermGroup(["a", "b"], [{"a": "a", "b": "a"}])


def test_cap_enforced():
    pts = [str(i) for i in range(9)]
    with pytest.raises(GroupError):
        closure(pts, symmetric_generators(pts), cap=1000)


@settings(max_examples=40, deadline=None)
@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_schreier_matches_brute(p1, p2):
    pts = [str(i) for i in range(6)]
    gens = [{pts[i]: pts[j] for i, j in enumerate(p)} for p in (p1, p2)]
    g = PermGroup(pts, gens)
    for x in pts[:2]:
        assert g.stabilizer_order(x) * len(g.orbit(x)) == g.order()
        for y in pts:
            assert g.stab_orbit_size(x, y) == g.stab_orbit_size_brute(x, y)


def test_permutation_algebra():
    pts = list("abc")
    p = Permutation.from_cycles(pts, [["a", "b", "c"]])
    assert (p * p.inverse()).as_mapping() == {}
    q = Permutation.from_mapping(pts, {"a": "b", "b": "a"})
    assert (p * q)("a") == p(q("a"))
