"""Z_{Γ,u→w}(s) for an edge-weighted graph: determinant formula, truncated series,
reciprocal formula and the splitting identities."""

from __future__ import annotations

from dataclasses import dataclass

from . import exact_linalg as la
from .exact_linalg import EXACT, FLOAT, Matrix, exponent_mode, neg_power
from .graph_core import GraphError, WeightedGraph, intersection, same_subgraph, union
from .weighted_paths import setting_gamma_ok, step_factor, target_edges, unit_term, weight_classes


class PoleError(ArithmeticError):
    pass


class IndeterminateError(ArithmeticError):
    pass


class HypothesisError(ValueError):
    """A decomposition does not satisfy the hypotheses of a splitting formula."""


@dataclass(frozen=True)
class ZetaValue:
    value: object
    is_pole: bool = False
    is_pole_candidate: bool = False
    formal: bool = False
    numerator: object = None
    denominator: object = None

    def require(self):
        if self.is_pole or self.is_pole_candidate:
            raise PoleError("pole: det(I - E(s)) vanishes")
        return self.value


def _mode(s) -> str:
    return exponent_mode(s)


def _zero(s):
    return la.coerce(0, _mode(s))


def _e_rows(g: WeightedGraph, pw, zero) -> list:
    n = len(g.edges)
    rows = [[zero] * n for _ in range(n)]
    for a in g.edges:
        i = g.index(a)
        for b in g.out_edges(g.terminus(a)):
            rows[i][g.index(b)] = pw(step_factor(g, a, b))
    return rows


def _vecmul(v, rows, zero) -> list:
    n = len(rows)
    return [sum((v[i] * rows[i][j] for i in range(n) if v[i]), zero) for j in range(n)]


def _boundary(g: WeightedGraph, u: str, w: str, pw, zero, e_rows) -> tuple:
    """(col, row) with U_{u,w} = colᵀ · row, for any scalar backend."""
    n = len(g.edges)
    col = [zero] * n
    for a in target_edges(g, w):
        col[g.index(a)] += 1
    row = [zero] * n
    if g.is_vertex(u):
        for a in g.out_edges(u):
            row[g.index(a)] += pw(g.weight[a])
        if g.is_edge(w):
            row = _vecmul(row, e_rows, zero)
    else:
        for a in target_edges(g, u):
            row[g.index(a)] += 1
        row = _vecmul(row, e_rows, zero)
    return col, row


def bass_E(g: WeightedGraph, s) -> Matrix:
    """E(s)(a,b) = N_edg(a,b)^(-s) if t(a) = o(b), else 0."""
    mode = _mode(s)
    return Matrix(_e_rows(g, lambda n: neg_power(n, s), la.coerce(0, mode)), g.edges, mode)


def indicator(g: WeightedGraph, u: str, mode: str) -> list:
    """e_u: the edge itself, or the sum of edges ending at a vertex."""
    vec = [la.coerce(0, mode)] * len(g.edges)
    for a in (g.in_edges(u) if g.is_vertex(u) else (u,)):
        vec[g.index(a)] += 1
    return vec


def capital_indicator(g: WeightedGraph, u: str, mode: str) -> list:
    """e_u for a vertex, e_u + e_ū for an edge."""
    vec = [la.coerce(0, mode)] * len(g.edges)
    for a in target_edges(g, u):
        vec[g.index(a)] += 1
    return vec


def boundary_vectors(g: WeightedGraph, u: str, w: str, s) -> tuple:
    """Row vectors (col, row) with U_{u,w}(s) = colᵀ · row."""
    g.site(u)
    g.site(w)
    zero = _zero(s)
    pw = lambda n: neg_power(n, s)  # noqa: E731
    return _boundary(g, u, w, pw, zero, _e_rows(g, pw, zero))


def perturbation_U(g: WeightedGraph, u: str, w: str, s) -> Matrix:
    col, row = boundary_vectors(g, u, w, s)
    return la.outer(col, row, _mode(s), g.edges)


def epsilon_term(g: WeightedGraph, u: str, w: str, s=-1):
    """Scalar added to the determinant ratio.

    For a vertex source and an edge target the length-one paths (b) with
    b ∈ {w, w̄} ∩ o⁻¹(u) are not produced by the matrix term and are added
    here, so the value depends on s. Every other case is an integer.
    """
    mode = _mode(s)
    g.site(u)
    g.site(w)
    if g.is_vertex(u) and g.is_edge(w):
        acc = la.coerce(-1, mode)
        for b in (w, g.inverse[w]):
            if g.origin[b] == u:
                acc += neg_power(g.weight[b], s)
        return acc
    return la.coerce(unit_term(g, u, w) - 1, mode)


def _symbolic_ratio(g: WeightedGraph, u: str, w: str, s) -> tuple:
    """Numerator and denominator determinants with common factors cancelled."""
    numbers = [g.weight[e] for e in g.edges] + [g.weight[e] - 1 for e in g.edges]
    pr = la.PowerRing(numbers)
    num, base = _poly_rows(g, u, w, pr)
    return la.reduced_ratio(pr, num, base, s)


def _poly_rows(g: WeightedGraph, u: str, w: str, pr) -> tuple:
    """Rows of I - E + U and I - E over the ring of pr."""
    zero = pr.ring.zero
    e_rows = _e_rows(g, pr.power, zero)
    n = len(g.edges)
    base = [[(pr.ring.one if i == j else zero) - e_rows[i][j] for j in range(n)] for i in range(n)]
    col, row = _boundary(g, u, w, pr.power, zero, e_rows)
    num = [[base[i][j] + col[i] * row[j] for j in range(n)] for i in range(n)]
    return num, base


def _finish(num, den, eps, formal, mode, reduced=False) -> ZetaValue:
    if mode == EXACT:
        if den == 0:
            if num == 0:
                raise IndeterminateError("0/0 in the determinant ratio")
            return ZetaValue(None, is_pole=True, formal=formal, numerator=num, denominator=den)
        return ZetaValue(num / den + eps, formal=formal, numerator=num, denominator=den)
    scale = max(abs(num), abs(den), 1.0)
    if abs(den) < la.POLE_RTOL * scale:
        if abs(num) < la.POLE_RTOL * scale:
            raise IndeterminateError("0/0 in the determinant ratio")
        return ZetaValue(None, is_pole_candidate=True, formal=formal, numerator=num, denominator=den)
    return ZetaValue(num / den + eps, formal=formal, numerator=num, denominator=den)


def zeta_det(g: WeightedGraph, u: str, w: str, s) -> ZetaValue:
    """det(I - E(s) + U_{u,w}(s)) / det(I - E(s)) + ε_u(w).

    If both determinants vanish at s, their common polynomial factor in the
    variables p^(-s) is cancelled and the reduced quotient is evaluated.
    """
    g.site(u)
    g.site(w)
    formal = not setting_gamma_ok(g)
    mode = _mode(s)
    e = bass_E(g, s)
    base = la.identity(e.dim, mode, g.edges) - e
    num_m = base + perturbation_U(g, u, w, s)
    den = la.det(base)
    num = la.det(num_m)
    eps = epsilon_term(g, u, w, s)
    if mode == EXACT:
        if den == 0 and num == 0:
            num, den = _symbolic_ratio(g, u, w, s)
        return _finish(num, den, eps, formal, mode)
    if la.is_pole_candidate(base, den):
        if la.is_pole_candidate(num_m, num):
            num, den = _symbolic_ratio(g, u, w, s)
            return _finish(num, den, eps, formal, mode)
        return ZetaValue(None, is_pole_candidate=True, formal=formal, numerator=num, denominator=den)
    return ZetaValue(num / den + eps, formal=formal, numerator=num, denominator=den)


def zeta_value(g: WeightedGraph, u: str, w: str, s):
    return zeta_det(g, u, w, s).require()


class SeriesMismatch(AssertionError):
    pass


def series_by_paths(g: WeightedGraph, u: str, w: str, s, L: int):
    acc = _zero(s)
    for n, cnt in series_coefficients(g, u, w, L).items():
        acc += cnt * neg_power(n, s)
    return acc


def series_by_matrix(g: WeightedGraph, u: str, w: str, s, L: int):
    """Partial Neumann sum of E(s) with the boundary vectors of Z_{u→w}."""
    mode = _mode(s)
    if L == 0:
        return la.coerce(unit_term(g, u, w), mode)
    e = bass_E(g, s)
    col = capital_indicator(g, w, mode)
    if g.is_vertex(u):
        r = [la.coerce(0, mode)] * len(g.edges)
        for a in g.out_edges(u):
            r[g.index(a)] += neg_power(g.weight[a], s)
        acc = la.dot(la.vector_neumann(r, e, 0, L - 1), col, mode)
    else:
        r = capital_indicator(g, u, mode)
        acc = la.dot(la.vector_neumann(r, e, 1, L - 1), col, mode) if L >= 2 else la.coerce(0, mode)
    return acc + unit_term(g, u, w)


def zeta_series(g: WeightedGraph, u: str, w: str, s, L: int, tol: float = 1e-9):
    """Partial sum over paths of length ≤ L, computed by grouped path enumeration
    and by matrix powers; the two must agree."""
    if L < 0:
        raise ValueError("L must be >= 0")
    by_paths = series_by_paths(g, u, w, s, L)
    by_matrix = series_by_matrix(g, u, w, s, L)
    if _mode(s) == EXACT:
        ok = by_paths == by_matrix
    else:
        ok = abs(by_paths - by_matrix) <= tol * max(1.0, abs(by_paths))
    if not ok:
        raise SeriesMismatch(f"path sum {by_paths} != matrix sum {by_matrix}")
    return by_paths


def series_coefficients(g: WeightedGraph, u: str, w: str, L: int) -> dict:
    """Coefficients (weight -> count) of the partial series over paths of length ≤ L."""
    if L == 0:
        unit = unit_term(g, u, w)
        return {1: unit} if unit else {}
    return weight_classes(g, u, w, max_len=L)


def G_matrix(g: WeightedGraph, u: str, s) -> Matrix:
    """G_u(s) = E(s) - U_{u,u}(s)."""
    return bass_E(g, s) - perturbation_U(g, u, u, s)


def first_return_reciprocal(g: WeightedGraph, u: str, s):
    """Z_{u→u}(s)^(-1) through the first-return formula, without inverting Z.
    Raises PoleError where I - G_u(s) is singular."""
    mode = _mode(s)
    g.site(u)
    n = len(g.edges)
    if n == 0:
        return la.coerce(1, mode)
    m = la.identity(n, mode, g.edges) - G_matrix(g, u, s)
    col = capital_indicator(g, u, mode)
    try:
        x = la.solve_right(m, col)
    except la.LinAlgError:
        raise PoleError("I - G_u(s) is singular") from None
    if g.is_vertex(u):
        r = [la.coerce(0, mode)] * n
        for a in g.out_edges(u):
            r[g.index(a)] += neg_power(g.weight[a], s)
    else:
        r = bass_E(g, s).vecmul(capital_indicator(g, u, mode))
    return la.coerce(1, mode) - la.dot(r, x, mode)


def zeta_reciprocal(g: WeightedGraph, u: str, s):
    """Z_{u→u}(s)^(-1): the first-return formula, or the reduced determinant
    quotient when I - G_u(s) is singular there."""
    try:
        return first_return_reciprocal(g, u, s)
    except PoleError:
        pass
    z = zeta_det(g, u, u, s)
    if z.is_pole or z.is_pole_candidate:
        return la.coerce(0, _mode(s))
    if z.value == 0:
        raise PoleError(f"Z_{{{u}->{u}}} vanishes at s={s}")
    return 1 / z.value


# -- splitting identities ---------------------------------------------------------

def _xi(x, s):
    return neg_power(x + 1, s) - neg_power(x, s)


def _is_segment(h: WeightedGraph) -> bool:
    return len(h.edges) == 2 and len(h.vertices) == 2


def check_vertex_split(g, g1, g2, c) -> None:
    if not same_subgraph(union(g, g1, g2), g):
        raise HypothesisError("Γ1 ∪ Γ2 ≠ Γ")
    if set(g1.vertices) & set(g2.vertices) != {c} or set(g1.edges) & set(g2.edges):
        raise HypothesisError("Γ1 ∩ Γ2 is not the single vertex c")


def check_edge_split(g, g1, g2, a) -> None:
    if not same_subgraph(union(g, g1, g2), g):
        raise HypothesisError("Γ1 ∪ Γ2 ≠ Γ")
    inter_e = set(g1.edges) & set(g2.edges)
    inter_v = set(g1.vertices) & set(g2.vertices)
    if inter_e != {a, g.inverse[a]} or inter_v != {g.origin[a], g.terminus(a)} or g.is_loop(a):
        raise HypothesisError("Γ1 ∩ Γ2 is not the 1-segment {a, ā}")
    # the block decomposition behind the identity needs each part to meet the
    # far end of the segment only through it
    c, d = g.origin[a], g.terminus(a)
    for h1, h2 in ((g1, g2), (g2, g1)):
        if set(h1.in_edges(d)) == {a} and set(h2.in_edges(c)) == {g.inverse[a]}:
            return
    raise HypothesisError("the segment is not terminal on the far side of each part")


def _check_setting(*graphs) -> None:
    for h in graphs:
        if not setting_gamma_ok(h):
            raise HypothesisError("weight setting fails on a part")


def verify_splitting(kind: str, g: WeightedGraph, parts, site: str, s) -> tuple:
    """Both sides of a splitting identity; the caller compares them.

    kinds and parts:
      vertex            (Γ1, Γ2)          Γ1 ∩ Γ2 = {c}
      vertex_overlap    (Λ1, Λ2, Γ1, Γ2)  Λ1 ∩ Λ2 = {c}, Λi ⊆ Γi
      edge              (Γ1, Γ2)          Γ1 ∩ Γ2 = segment {a, ā}
      edge_overlap      (Λ1, Λ2, Γ1, Γ2)
      terminal_segment  ()                o(a) terminal, returns (lhs_c, rhs_c, lhs_a, rhs_a)
      loop              ()                a a loop
    """
    _check_setting(g)
    if kind == "vertex":
        g1, g2 = parts
        check_vertex_split(g, g1, g2, site)
        _check_setting(g1, g2)
        lhs = zeta_reciprocal(g, site, s)
        rhs = zeta_reciprocal(g1, site, s) + zeta_reciprocal(g2, site, s) - 1
        return lhs, rhs
    if kind == "vertex_overlap":
        l1, l2, g1, g2 = parts
        check_vertex_split(g, l1, l2, site)
        _subset(l1, g1)
        _subset(l2, g2)
        g3 = intersection(g, g1, g2)
        _check_setting(g1, g2, g3)
        lhs = zeta_reciprocal(g, site, s)
        rhs = zeta_reciprocal(g1, site, s) + zeta_reciprocal(g2, site, s) - zeta_reciprocal(g3, site, s)
        return lhs, rhs
    if kind == "edge":
        g1, g2 = parts
        check_edge_split(g, g1, g2, site)
        g3 = intersection(g, g1, g2)
        _check_setting(g1, g2, g3)
        lhs = zeta_reciprocal(g, site, s)
        rhs = zeta_reciprocal(g1, site, s) + zeta_reciprocal(g2, site, s) - zeta_reciprocal(g3, site, s)
        return lhs, rhs
    if kind == "edge_overlap":
        l1, l2, g1, g2 = parts
        check_edge_split(g, l1, l2, site)
        _subset(l1, g1)
        _subset(l2, g2)
        g3 = intersection(g, g1, g2)
        _check_setting(g1, g2, g3)
        lhs = zeta_reciprocal(g, site, s)
        rhs = zeta_reciprocal(g1, site, s) + zeta_reciprocal(g2, site, s) - zeta_reciprocal(g3, site, s)
        return lhs, rhs
    if kind == "terminal_segment":
        return _terminal_segment(g, site, s)
    if kind == "loop":
        return _loop(g, site, s)
    raise ValueError(f"unknown splitting kind {kind}")


def _subset(small, big) -> None:
    if not (set(small.vertices) <= set(big.vertices) and set(small.edges) <= set(big.edges)):
        raise HypothesisError("Λi is not contained in Γi")


def _terminal_segment(g: WeightedGraph, a: str, s) -> tuple:
    c, d = g.origin[a], g.terminus(a)
    if c == d:
        raise HypothesisError("a is a loop")
    if g.out_edges(c) != (a,):
        raise HypothesisError("o(a) is not a terminal vertex")
    abar = g.inverse[a]
    lam = g.subgraph(set(g.vertices) - {c}, set(g.edges) - {a, abar})
    _check_setting(lam)
    alpha, beta = g.weight[a] - 1, g.weight[abar] - 1
    r = zeta_reciprocal(lam, d, s)
    xa, xb = _xi(alpha, s), _xi(beta, s)
    pa, pb1 = neg_power(alpha, s), neg_power(beta + 1, s)
    top = (1 + pa * xb) * r - pa * pb1
    bot_c = (1 - xa * xb) * r + xa * pb1
    bot_a = (1 + pa) * ((1 - xb) * r + pb1)
    if bot_c == 0 or bot_a == 0:
        raise PoleError("vanishing denominator in the reduction formula")
    return zeta_reciprocal(g, c, s), top / bot_c, zeta_reciprocal(g, a, s), top / bot_a


def _loop(g: WeightedGraph, a: str, s) -> tuple:
    if not g.is_loop(a):
        raise HypothesisError("a is not a loop")
    c = g.origin[a]
    abar = g.inverse[a]
    lam = g.subgraph(g.vertices, set(g.edges) - {a, abar})
    _check_setting(lam)
    alpha, beta = g.weight[a] - 1, g.weight[abar] - 1
    r = zeta_reciprocal(lam, c, s)
    pa, pa1 = neg_power(alpha, s), neg_power(alpha + 1, s)
    pb, pb1 = neg_power(beta, s), neg_power(beta + 1, s)
    xi1 = 1 - (pa - pa1) * (pb - pb1)
    xi2 = (1 + pa - pa1) * (1 + pb - pb1)
    eta = (pa + 1) * pb1 + pa1 * (pb + 1) - 2 * pa1 * pb1
    bot = xi2 * r + eta
    if bot == 0 and _mode(s) == EXACT and (xi1 * r - eta) == 0:
        return zeta_reciprocal(g, a, s), _loop_limit(g, lam, c, alpha, beta, s)
    if bot == 0:
        raise PoleError("vanishing denominator in the loop formula")
    return zeta_reciprocal(g, a, s), (xi1 * r - eta) / bot


def _loop_limit(g: WeightedGraph, lam: WeightedGraph, c: str, alpha: int, beta: int, s):
    """The loop right-hand side as a ratio of polynomials in p^(-s), so a
    0/0 of the closed form is resolved like any other."""
    numbers = [g.weight[e] for e in g.edges] + [g.weight[e] - 1 for e in g.edges]
    pr = la.PowerRing(numbers)
    one = pr.ring.one
    if lam.edges:
        num_rows, base_rows = _poly_rows(lam, c, c, pr)
        # Z_Λ^(-1) = det(I - E) / det(I - E + U)
        rp, rq = la.poly_det(base_rows), la.poly_det(num_rows)
    else:
        rp, rq = one, one
    pa, pa1, pb, pb1 = (pr.power(x) for x in (alpha, alpha + 1, beta, beta + 1))
    xi1 = one - (pa - pa1) * (pb - pb1)
    xi2 = (one + pa - pa1) * (one + pb - pb1)
    eta = (pa + one) * pb1 + pa1 * (pb + one) - 2 * pa1 * pb1
    num, den = la.poly_ratio(pr, xi1 * rp - eta * rq, xi2 * rp + eta * rq, s)
    if den == 0:
        raise PoleError("the loop formula has a pole here")
    return num / den


def loop_formula_equal_weights(g: WeightedGraph, a: str, s):
    """The α = β specialization, written out separately."""
    c = g.origin[a]
    abar = g.inverse[a]
    alpha = g.weight[a] - 1
    if g.weight[abar] - 1 != alpha:
        raise HypothesisError("ω(a) ≠ ω(ā)")
    lam = g.subgraph(g.vertices, set(g.edges) - {a, abar})
    r = zeta_reciprocal(lam, c, s)
    pa, pa1 = neg_power(alpha, s), neg_power(alpha + 1, s)
    return ((1 - pa + pa1) * r - 2 * pa1) / ((1 + pa - pa1) * r + 2 * pa1)
