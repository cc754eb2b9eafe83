"""Path weights N_edg/N_vert, property (*_k), and Dirichlet coefficient tables."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .graph_core import GraphError, Path, WeightedGraph, enumerate_paths


class SettingError(ValueError):
    """The weight hypotheses needed for a computation do not hold."""


def step_factor(g: WeightedGraph, a: str, b: str) -> int:
    """N_edg of the two-edge path (a, b)."""
    return g.weight[b] - (1 if b == g.inverse[a] else 0)


def n_edg(g: WeightedGraph, p: Path) -> int:
    n = len(p.edges)
    if n <= 1:
        return n
    w = 1
    for a, b in zip(p.edges, p.edges[1:]):
        w *= step_factor(g, a, b)
    return w


def n_vert(g: WeightedGraph, p: Path) -> int:
    if not p.edges:
        return 1
    return g.weight[p.edges[0]] * n_edg(g, p)


def _check_liftable(g: WeightedGraph) -> None:
    low = [e for e in g.edges if g.weight[e] < 2]
    if low:
        raise SettingError(f"edge {low[0]} has weight {g.weight[low[0]]} < 2")


def _unit_step_graph(g: WeightedGraph) -> dict:
    """Transitions a -> b with N_edg(a, b) = 1."""
    return {a: [b for b in g.out_edges(g.terminus(a)) if step_factor(g, a, b) == 1]
            for a in g.edges}


def star_k_wlit(g: WeightedGraph, k: int) -> bool:
    """Every path of length k+1 has N_edg ≥ 2.

    Since each step factor is ≥ 1, a path fails only if all its k steps have
    factor 1, so the search only follows unit steps.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_liftable(g)
    succ = _unit_step_graph(g)
    frontier = set(g.edges)
    for _ in range(k):
        frontier = {b for a in frontier for b in succ[a]}
        if not frontier:
            return True
    return False


def star_k_wlit_brute(g: WeightedGraph, k: int) -> bool:
    """Reference check by listing every path of length k+1."""
    _check_liftable(g)
    for v in g.vertices:
        for p in enumerate_paths(g, v, k + 1):
            if len(p) == k + 1 and n_edg(g, p) < 2:
                return False
    return True


def min_star_k(g: WeightedGraph) -> int | None:
    """Smallest k ≤ |EΓ|²+2 with (*_k), or None."""
    bound = len(g.edges) ** 2 + 2
    _check_liftable(g)
    succ = _unit_step_graph(g)
    frontier = set(g.edges)
    for k in range(1, bound + 1):
        frontier = {b for a in frontier for b in succ[a]}
        if not frontier:
            return k
    return None


def setting_gamma_ok(g: WeightedGraph) -> bool:
    if any(g.weight[e] < 2 for e in g.edges):
        return False
    return all(g.weight[e] >= 3 or g.weight[g.inverse[e]] >= 3 for e in g.edges)


def max_tree_degree(g: WeightedGraph) -> int:
    """M: the largest vertex degree in the universal cover, Σ_{a∈o⁻¹(c)} ω(a)."""
    return max(sum(g.weight[e] for e in g.out_edges(v)) for v in g.vertices)


# -- grouped path enumeration -------------------------------------------------

def target_edges(g: WeightedGraph, w: str) -> frozenset:
    """Edges a path must end with to end at w: t⁻¹(w) for a vertex, {w, w̄} for an edge."""
    if g.is_vertex(w):
        return frozenset(g.in_edges(w))
    g.site(w)
    return frozenset((w, g.inverse[w]))


def unit_term(g: WeightedGraph, u: str, w: str) -> int:
    """The constant term: the trivial path for vertex u = w, ε_a(w) for an edge source."""
    if g.is_vertex(u):
        return 1 if u == w else 0
    if g.is_vertex(w):
        return 1 if w in (g.origin[u], g.terminus(u)) else 0
    return 1 if w in (u, g.inverse[u]) else 0


def weight_classes(g: WeightedGraph, u: str, w: str, max_len: int | None = None,
                   max_weight: int | None = None) -> dict:
    """Map weight -> number of counted paths from u ending at w.

    Counted paths are the ones summed in Z_{u→w}: every path from a vertex
    source (weight N_vert), paths of length ≥ 2 from an edge source (weight
    N_edg), plus the unit term at weight 1. Paths are grouped by (last edge,
    weight) while they are extended, so no path list is ever materialized.
    """
    if max_len is None and max_weight is None:
        raise ValueError("need a length or weight bound")
    g.site(u)
    targets = target_edges(g, w)
    out = defaultdict(int)
    unit = unit_term(g, u, w)
    if unit:
        out[1] += unit
    if g.is_vertex(u):
        layer = defaultdict(int)
        for a in g.out_edges(u):
            layer[(a, g.weight[a])] += 1
        min_len = 1
    else:
        layer = defaultdict(int)
        for a in (u, g.inverse[u]):
            layer[(a, 1)] += 1
        min_len = 2
    length = 1
    while layer:
        if length >= min_len:
            for (a, wt), cnt in layer.items():
                if a in targets and (max_weight is None or wt <= max_weight):
                    out[wt] += cnt
        if max_len is not None and length >= max_len:
            break
        nxt = defaultdict(int)
        for (a, wt), cnt in layer.items():
            for b in g.out_edges(g.terminus(a)):
                nw = wt * step_factor(g, a, b)
                if nw == 0 or (max_weight is not None and nw > max_weight):
                    continue
                nxt[(b, nw)] += cnt
        layer = nxt
        length += 1
    return dict(out)


@dataclass
class CoefficientTable:
    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    n_max: int = 0

    def to_tsv(self) -> str:
        lines = []
        for n in range(1, self.n_max + 1):
            an = self.a.get(n, 0)
            bn = self.b.get(n, 0)
            if an or bn:
                lines.append(f"{n}\t{an}\t{bn}")
        return "\n".join(lines)


def dirichlet_coefficients_wlit(g: WeightedGraph, u: str, w: str, n_max: int) -> CoefficientTable:
    """a_n: number of paths u→W of weight n; b_n: number of their lifts (cosets).

    Completeness: by (*_k), a path of weight ≤ n_max has length at most
    k·(log₂ n_max + 1); the search below stops by weight and never hits that
    bound, which is asserted.
    """
    if not setting_gamma_ok(g):
        raise SettingError("weights violate the polynomial-growth setting")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    k = min_star_k(g)
    bound = k * (math.log2(n_max) + 1) + 1
    classes = weight_classes(g, u, w, max_len=int(bound) + 1, max_weight=n_max)
    longest = _longest_counted(g, u, w, n_max)
    if longest > bound:
        raise AssertionError("path of small weight longer than the (*_k) bound")
    a = {n: c for n, c in sorted(classes.items()) if n <= n_max}
    # each counted path of weight n stands for a double coset of n cosets
    b = {n: n * c for n, c in a.items()}
    return CoefficientTable(a, b, n_max)


def _longest_counted(g: WeightedGraph, u: str, w: str, n_max: int) -> int:
    """Length of the longest path from u (any end) with weight ≤ n_max."""
    if g.is_vertex(u):
        layer = {(a, g.weight[a]) for a in g.out_edges(u) if g.weight[a] <= n_max}
    else:
        layer = {(u, 1), (g.inverse[u], 1)}
    length = 0
    while layer:
        length += 1
        layer = {(b, wt * step_factor(g, a, b)) for a, wt in layer for b in g.out_edges(g.terminus(a))
                 if 0 < wt * step_factor(g, a, b) <= n_max}
    return length


def cumulative_counts(table: CoefficientTable) -> list:
    total = 0
    out = []
    for n in range(1, table.n_max + 1):
        total += table.a.get(n, 0)
        out.append(total)
    return out


def growth_slope(table: CoefficientTable, points: int = 40) -> float:
    """Least-squares slope of log C(n) against log n on a log-spaced grid (n ≥ 10)."""
    cum = cumulative_counts(table)
    lo = min(10, table.n_max)
    grid = sorted({int(round(math.exp(math.log(lo) + i * (math.log(table.n_max) - math.log(lo)) / (points - 1))))
                   for i in range(points)})
    xs, ys = [], []
    for n in grid:
        if cum[n - 1] > 0:
            xs.append(math.log(n))
            ys.append(math.log(cum[n - 1]))
    if len(xs) < 2:
        return 0.0
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx if sxx else 0.0


def growth_bound(g: WeightedGraph) -> float:
    k = min_star_k(g)
    m = max_tree_degree(g)
    return k * math.log2(m - 1) + 1
