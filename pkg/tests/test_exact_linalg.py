from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treezeta import exact_linalg as la
from treezeta.exact_linalg import EXACT, FLOAT, Matrix

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def square(n):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n)


def test_det_small():
    assert la.det(la.identity(2)) == 1
    assert la.det(Matrix([[0, 2], [2, 0]])) == -4


def test_det_float_mode():
    m = Matrix([[1.0, 2.0], [3.0, 4.0]])
    assert m.mode == FLOAT
    assert abs(la.det(m) - (-2.0)) < 1e-12


def test_mixed_modes_rejected():
    with pytest.raises(la.ModeError):
        Matrix([[Fraction(1), 0.5], [0, 1]])


def test_neg_power_modes():
    assert la.neg_power(3, 2) == Fraction(1, 9)
    assert la.neg_power(3, -1) == 3
    assert la.neg_power(0, 2) == 0
    assert abs(la.neg_power(2, 1j) - 2 ** (-1j)) < 1e-15


def test_mdl_trivial():
    a = la.identity(3)
    zero = [Fraction(0)] * 3
    e1 = [Fraction(1), Fraction(0), Fraction(0)]
    assert la.mdl_ratio(a, zero, e1) == 1
    assert la.mdl_ratio(a, e1, e1) == 2


@settings(max_examples=60, deadline=None)
@given(square(3), st.lists(fractions, min_size=3, max_size=3), st.lists(fractions, min_size=3, max_size=3))
def test_mdl_matches_quotient(rows, u, v):
    a = Matrix(rows, mode=EXACT)
    d = la.det(a)
    if d == 0:
        return
    updated = a + la.outer(u, v, EXACT)
    assert la.mdl_ratio(a, u, v) == la.det(updated) / d


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_bareiss_matches_sympy(rows):
    import sympy
    assert la.det(Matrix(rows, mode=EXACT)) == Fraction(str(sympy.Matrix(rows).det()))


def test_neumann_zero_and_nilpotent():
    m = Matrix([[0, 1, 2], [0, 0, 3], [0, 0, 0]])
    assert la.neumann_partial(m, 0) == la.identity(3)
    inv = la.inverse(la.identity(3) - m)
    assert la.neumann_partial(m, 3) == inv
    assert la.neumann_partial(m, 7) == inv


def test_neumann_geometric_tail():
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, (4, 4))
    a *= 0.5 / max(abs(np.linalg.eigvals(a)))
    m = Matrix(a.astype(complex).tolist())
    oracle = np.linalg.solve(np.eye(4) - a, np.eye(4))
    L = 60
    got = la.neumann_partial(m, L).to_numpy()
    norm = np.linalg.norm(a, 2)
    tail = norm ** (L + 1) / (1 - norm) if norm < 1 else 1e-6
    assert np.max(np.abs(got - oracle)) <= max(tail, 1e-12) * 4


def test_inverse_roundtrip():
    m = Matrix([[2, 1], [1, 1]])
    assert m @ la.inverse(m) == la.identity(2)


def test_poly_adjugate():
    pr = la.PowerRing([2, 3])
    y2, y3 = pr.gens
    rows = [[1 - y2, -y3], [-y2 * y3, 1 + y2]]
    delta, adj = la.poly_adjugate(rows)
    det = la.poly_det(rows)
    assert delta in (det, -det)
    for i in range(2):
        for j in range(2):
            entry = sum(rows[i][k] * adj[k][j] for k in range(2))
            assert entry == (delta if i == j else 0)


def test_curve_limit_on_common_zero():
    # both sides vanish at s = 2
    pr = la.PowerRing([2, 3])
    y2, y3 = pr.gens
    p = 4 * y2 - 1
    q = 9 * y3 - 1
    val = la.poly_ratio(pr, p, q, 2)
    # limit of (4·2^-s - 1)/(9·3^-s - 1) at s = 2 is log 2 / log 3
    import math
    assert abs(complex(val[0]) / complex(val[1]) - math.log(2) / math.log(3)) < 1e-12
