"""Unimodularity, the Euler–Poincaré characteristic χ(Γ,u), the transition
weight T = E(-1) with det(I - xT), and the checks tying them to Z(-1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact_linalg as la
from .exact_linalg import EXACT, Matrix, exponent_mode
from .graph_core import (GraphError, Path, WeightedGraph, cut_splits, fundamental_cycles,
                         has_long_cycle, intersection, is_reduced, oriented_spanning,
                         path_compose, path_reverse, same_subgraph, spanning_tree, tree_path, union)
from .weighted_paths import SettingError, n_edg, n_vert, setting_gamma_ok
from .zeta_wlit import HypothesisError, PoleError, bass_E, zeta_reciprocal, zeta_det


class NotUnimodular(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    label: str
    ok: bool
    lhs: object = None
    rhs: object = None

    def line(self) -> str:
        if self.ok:
            return f"OK {self.label}"
        return f"FAIL {self.label} lhs={self.lhs} rhs={self.rhs}"


def _check(label, lhs, rhs) -> Check:
    return Check(label, lhs == rhs, lhs, rhs)


# -- unimodularity ------------------------------------------------------------------

def balance(g: WeightedGraph, p: Path) -> Fraction:
    """∏ ω(a_i) / ∏ ω(ā_i) along p."""
    r = Fraction(1)
    for e in p.edges:
        r *= Fraction(g.weight[e], g.weight[g.inverse[e]])
    return r


def is_unimodular(g: WeightedGraph) -> bool:
    """Every fundamental cycle is balanced.

    The balance ratio is multiplicative under concatenation, inverts under
    reversal and equals 1 on a backtrack (a, ā), so it factors through the
    fundamental group; checking a free basis is enough.
    """
    return all(balance(g, cyc) == 1 for cyc in fundamental_cycles(g))


# -- χ -----------------------------------------------------------------------------

def _ratio_vert(g: WeightedGraph, p: Path) -> Fraction:
    return Fraction(n_vert(g, p), n_vert(g, path_reverse(g, p)))


def chi_vertex(g: WeightedGraph, c: str, tree_root: str | None = None) -> Fraction:
    lam, orient = oriented_spanning(g, c, tree_root)
    tree = frozenset(lam.edges)
    total = Fraction(1)
    for a in sorted(orient.positive):
        if a in tree:
            p = tree_path(g, tree, c, g.origin[a])
            total += (1 - g.weight[a]) * _ratio_vert(g, p)
        else:
            q = path_compose(g, tree_path(g, tree, c, g.origin[a]), Path(g.origin[a], (a,)))
            total -= Fraction(n_vert(g, q), n_edg(g, path_reverse(g, q)))
    return total


def chi_at(g: WeightedGraph, u: str, tree_root: str | None = None) -> Fraction:
    """χ(Γ,u); for an edge, χ(Γ,o(a)) / ω(a)."""
    if not is_unimodular(g):
        raise NotUnimodular("graph is not unimodular")
    g.site(u)
    if g.is_vertex(u):
        return chi_vertex(g, u, tree_root)
    return chi_vertex(g, g.origin[u], tree_root) / g.weight[u]


def _reduced_edge_path(g: WeightedGraph, tree: frozenset, a: str, b: str) -> Path | None:
    """a · (tree path t(a) → o(b)) · b when that is reduced."""
    if a == b:
        return Path(g.origin[a], (a,))
    mid = tree_path(g, tree, g.terminus(a), g.origin[b])
    p = Path(g.origin[a], (a,) + mid.edges + (b,))
    return p if is_reduced(g, p) else None


def verify_chi_relations(g: WeightedGraph) -> list:
    """Transport relations of χ along edges and paths, independence of the
    spanning-tree choice, and additivity over cut vertices."""
    if not is_unimodular(g):
        raise NotUnimodular("graph is not unimodular")
    out = []
    chi = {u: chi_at(g, u) for u in g.vertices + g.edges}
    for c in g.vertices:
        for r in g.vertices:
            out.append(_check(f"chi-tree-choice {c} root={r}", chi_vertex(g, c, r), chi[c]))
    for a in g.edges:
        out.append(_check(f"chi-edge {a}", chi[g.origin[a]], g.weight[a] * chi[a]))
        out.append(_check(f"chi-bar {a}", chi[a], chi[g.inverse[a]]))
    tree, _ = spanning_tree(g)
    for c in g.vertices:
        for d in g.vertices:
            p = tree_path(g, tree, c, d)
            out.append(_check(f"chi-vertex-transport {c}->{d}", chi[c], _ratio_vert(g, p) * chi[d]))
    for a in g.edges:
        for b in g.edges:
            q = _reduced_edge_path(g, tree, a, b)
            if q is None:
                continue
            ratio = Fraction(n_edg(g, q), n_edg(g, path_reverse(g, q)))
            out.append(_check(f"chi-edge-transport {a}->{b}", chi[a], ratio * chi[b]))
    for c in g.vertices:
        for g1, g2 in cut_splits(g, c):
            rhs = chi_at(g1, c) + chi_at(g2, c) - 1
            out.append(_check(f"chi-additive {c} {sorted(g1.edges)}|{sorted(g2.edges)}", chi[c], rhs))
    return out


# -- χ against Z(-1) ----------------------------------------------------------------

def chi_reciprocal_preconditions(g: WeightedGraph) -> None:
    if not setting_gamma_ok(g):
        raise SettingError("weights violate the polynomial-growth setting")
    if has_long_cycle(g):
        raise HypothesisError("graph has a cycle of length >= 2")
    if not is_unimodular(g):
        raise NotUnimodular("graph is not unimodular")


def verify_chi_reciprocal(g: WeightedGraph) -> list:
    """χ(Γ,u) = Z_{u→u}(-1)^(-1) at every u, plus the transport identities of
    the reciprocal and the symmetry between a and ā."""
    chi_reciprocal_preconditions(g)
    out = []
    inv = {u: zeta_reciprocal(g, u, -1) for u in g.vertices + g.edges}
    for u in g.vertices + g.edges:
        out.append(_check(f"chi=1/Z {u}", chi_at(g, u), inv[u]))
    for a in g.edges:
        out.append(_check(f"1/Z transport {a}", inv[g.origin[a]], g.weight[a] * inv[a]))
        out.append(_check(f"1/Z bar {a}", inv[a], inv[g.inverse[a]]))
    tree, _ = spanning_tree(g)
    for c in g.vertices:
        for d in g.vertices:
            p = tree_path(g, tree, c, d)
            out.append(_check(f"1/Z vertex-transport {c}->{d}", inv[c], _ratio_vert(g, p) * inv[d]))
    for a in g.edges:
        for b in g.edges:
            q = _reduced_edge_path(g, tree, a, b)
            if q is None:
                continue
            ratio = Fraction(n_edg(g, q), n_edg(g, path_reverse(g, q)))
            out.append(_check(f"1/Z edge-transport {a}->{b}", inv[a], ratio * inv[b]))
    return out


# -- weighted Ihara zeta -----------------------------------------------------------------

def transition_weight(g: WeightedGraph) -> Matrix:
    """T(a,b) = N_edg(a,b) when t(a) = o(b); this is E(-1)."""
    low = [e for e in g.edges if g.weight[e] < 2]
    if low:
        raise SettingError(f"edge {low[0]} has weight {g.weight[low[0]]} < 2")
    return bass_E(g, -1)


def ihara_reciprocal(t: Matrix, x) -> object:
    """Z_{(Γ,W)}(x)^(-1) = det(I - xT)."""
    mode = exponent_mode(x) if not isinstance(x, Fraction) else EXACT
    if mode == EXACT:
        x = Fraction(x)
        m = Matrix([[Fraction(int(i == j)) - x * t[i, j] for j in range(t.dim)] for i in range(t.dim)],
                   t.labels, EXACT)
    else:
        x = complex(x)
        m = Matrix([[complex(i == j) - x * complex(t[i, j]) for j in range(t.dim)] for i in range(t.dim)],
                   t.labels, la.FLOAT)
    return la.det(m)


def check_ihara_decomposition(g: WeightedGraph, g1: WeightedGraph, g2: WeightedGraph, a: str) -> None:
    if not setting_gamma_ok(g):
        raise SettingError("weights violate the polynomial-growth setting")
    if not same_subgraph(union(g, g1, g2), g):
        raise HypothesisError("Γ1 ∪ Γ2 is not Γ")
    meet = intersection(g, g1, g2)
    ab = g.inverse[a]
    if set(meet.edges) != {a, ab} or len(meet.vertices) != 2:
        raise HypothesisError(f"Γ1 ∩ Γ2 is not the 1-segment {{{a}, {ab}}}")
    if set(g1.in_edges(g.terminus(a))) != {a}:
        raise HypothesisError(f"t({a}) is not terminal in Γ1")
    if set(g2.in_edges(g.origin[a])) != {ab}:
        raise HypothesisError(f"o({a}) is not terminal in Γ2")


@dataclass(frozen=True)
class IharaRatioResult:
    lhs: Fraction
    rhs: Fraction
    chi_lhs: Fraction | None = None
    chi_rhs: Fraction | None = None


def _z_value(h: WeightedGraph, a: str) -> Fraction:
    z = zeta_det(h, a, a, -1)
    if z.is_pole:
        raise PoleError(f"Z_{{{a}->{a}}}(-1) is a pole on a subgraph")
    return z.value


def verify_ihara_ratio(g: WeightedGraph, g1: WeightedGraph, g2: WeightedGraph, a: str) -> IharaRatioResult:
    """Both sides of the ratio identity at s = -1, x = 1; plus the χ form when
    Γ is unimodular."""
    check_ihara_decomposition(g, g1, g2, a)
    z, z1, z2 = _z_value(g, a), _z_value(g1, a), _z_value(g2, a)
    d, d1, d2 = (ihara_reciprocal(transition_weight(h), 1) for h in (g, g1, g2))
    if z1 == 0 or z2 == 0 or d == 0:
        raise PoleError("a zero or pole of a factor at s = -1")
    lhs = z / (z1 * z2)
    # Z_{(Γ,W)}(1) = 1 / det(I - T)
    rhs = Fraction(1, g.weight[a] * g.weight[g.inverse[a]]) * (d1 * d2) / d
    if not is_unimodular(g):
        return IharaRatioResult(lhs, rhs)
    c, c1, c2 = chi_at(g, a), chi_at(g1, a), chi_at(g2, a)
    if c == 0:
        raise PoleError("χ(Γ,a) = 0")
    return IharaRatioResult(lhs, rhs, c1 * c2 / c, rhs)
