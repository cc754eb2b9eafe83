"""Local action diagrams: colours, local groups, inversions, Δ-paths, the
standard weight W, the operator F(s) and the (P)-closed zeta function."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from . import exact_linalg as la
from .exact_linalg import EXACT, Matrix, exponent_mode, neg_power
from .graph_core import GraphError, Path, WeightedGraph, enumerate_paths, validate_graph
from .perm_groups import (DEFAULT_CAP, GroupError, PermGroup, block_symmetric_group,
                          cyclic_generators, dihedral_generators, psl2_generators,
                          symmetric_generators)
from .weighted_paths import SettingError, n_edg, n_vert
from .zeta_wlit import IndeterminateError, ZetaValue, _finish

ROOT = "root"
TREE_CAP = 10 ** 6


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class DeltaPath:
    colors: tuple
    anchor: str | None = None  # vertex for the 0-path

    def __len__(self) -> int:
        return len(self.colors)


class LocalActionDiagram:
    """(Γ, X_a, G(c)) with an optional inversion ι.

    Colours are re-indexed globally (sorted by edge, then listed order) so
    that F(s) has reproducible row labels.
    """

    def __init__(self, graph: WeightedGraph, colors: Mapping[str, list], groups: Mapping[str, PermGroup],
                 inversion: Mapping[str, str] | None = None):
        self.graph = graph
        self.colors = {a: tuple(colors[a]) for a in graph.edges}
        self.order = tuple(x for a in graph.edges for x in self.colors[a])
        self.edge_of = {x: a for a in graph.edges for x in self.colors[a]}
        self.pos = {x: i for i, x in enumerate(self.order)}
        self.groups = dict(groups)
        self.inversion = dict(inversion) if inversion is not None else None
        self._w_cache = {}
        self._wrev_cache = {}
        self._poly_cache = {}

    # -- basic sets ------------------------------------------------------------

    def vertex_colors(self, c: str) -> tuple:
        """X_c: colours of the edges leaving c."""
        return tuple(x for a in self.graph.out_edges(c) for x in self.colors[a])

    def capital_colors(self, u: str) -> frozenset:
        """Colours a Δ-path must end with to end at u.

        For a vertex these are the colours of edges ending at u; for an edge,
        X_u ⊔ X_ū.
        """
        g = self.graph
        if g.is_vertex(u):
            return frozenset(x for a in g.in_edges(u) for x in self.colors[a])
        g.site(u)
        return frozenset(self.colors[u] + self.colors[g.inverse[u]])

    def iota(self, iota=None) -> dict:
        if iota is not None:
            return iota
        if self.inversion is None:
            raise DiagramError("no inversion given and X_a, X_ā differ in size")
        return self.inversion

    def check_color(self, x: str) -> None:
        if x not in self.edge_of:
            raise DiagramError(f"unknown colour {x}")

    def __repr__(self) -> str:
        return f"LocalActionDiagram(|E|={len(self.graph.edges)}, |X|={len(self.order)})"


# -- validation --------------------------------------------------------------------

def default_inversion(graph: WeightedGraph, colors: Mapping[str, tuple]) -> dict | None:
    """Pair the i-th colour of X_a with the i-th colour of X_ā; None if sizes differ."""
    out = {}
    for a in graph.edges:
        xa, xb = colors[a], colors[graph.inverse[a]]
        if len(xa) != len(xb):
            return None
        out.update(zip(xa, xb))
    return out


def modular_inversion(graph: WeightedGraph, colors: Mapping[str, tuple]) -> dict:
    """x_i ↦ the (i mod |X_ā|)-th colour of X_ā; agrees with the default when sizes match."""
    out = {}
    for a in graph.edges:
        xa, xb = colors[a], colors[graph.inverse[a]]
        out.update((x, xb[i % len(xb)]) for i, x in enumerate(xa))
    return out


def validate_inversion(d: LocalActionDiagram, raw: Mapping) -> dict:
    iota = {}
    for x in d.order:
        if x not in raw:
            raise DiagramError(f"inversion: colour {x} has no image")
        y = str(raw[x])
        a = d.edge_of[x]
        if d.edge_of.get(y) != d.graph.inverse[a]:
            raise DiagramError(f"inversion.{x}: image {y} is not in X of {d.graph.inverse[a]}")
        iota[x] = y
    extra = set(raw) - set(d.order)
    if extra:
        raise DiagramError(f"inversion: unknown colour {sorted(extra)[0]}")
    return iota


def _group_spec(raw: Mapping, vid: str, k: int | None):
    if "groups" in raw and vid in raw["groups"]:
        return raw["groups"][vid], f"groups.{vid}"
    if k is not None:
        v = raw["vertices"][k]
        if isinstance(v, Mapping) and "group" in v:
            return v["group"], f"vertices[{k}].group"
    return None, f"groups.{vid}"


def _build_group(spec, where: str, xc: tuple, blocks: list, cap: int) -> PermGroup:
    if spec is None:
        raise DiagramError(f"{where}: missing group")
    if spec == "full":
        return block_symmetric_group(xc, blocks, cap)
    if not isinstance(spec, Mapping) or "generators" not in spec:
        raise DiagramError(f'{where}: expected "full" or an object with "generators"')
    gens = []
    for j, m in enumerate(spec["generators"]):
        if not isinstance(m, Mapping):
            raise DiagramError(f"{where}.generators[{j}]: expected a mapping")
        try:
            gens.append({str(x): str(y) for x, y in m.items()})
            PermGroup(xc, gens[-1:], cap)
        except GroupError as exc:
            raise DiagramError(f"{where}.generators[{j}]: {exc}") from None
    return PermGroup(xc, gens, cap)


def validate_lad(raw: Mapping, cap: int = DEFAULT_CAP) -> LocalActionDiagram:
    """Build a diagram from its JSON form.

    Edges carry "colors" instead of "weight"; groups come from a vertex object
    {"id":…, "group":…} or from a top-level "groups" map; a group is either
    "full" or {"generators": [mapping, …]}.
    """
    if not isinstance(raw, Mapping):
        raise DiagramError("diagram document must be an object")
    try:
        vlist = raw["vertices"]
        items = raw["edges"]
    except KeyError as exc:
        raise DiagramError(f"missing field {exc}") from None
    vids = []
    for k, v in enumerate(vlist):
        if isinstance(v, Mapping):
            if "id" not in v:
                raise DiagramError(f"vertices[{k}]: missing id")
            vids.append(str(v["id"]))
        else:
            vids.append(str(v))
    colors, edges, seen = {}, [], {}
    for k, item in enumerate(items):
        if not isinstance(item, Mapping):
            raise DiagramError(f"edges[{k}]: expected an object")
        cols = item.get("colors")
        if not isinstance(cols, list) or not cols:
            raise DiagramError(f"edges[{k}].colors: need a non-empty list")
        name = str(item.get("name"))
        cols = [str(x) for x in cols]
        for j, x in enumerate(cols):
            if x in seen:
                raise DiagramError(f"edges[{k}].colors[{j}]: colour {x} already used by edge {seen[x]}")
            seen[x] = name
        colors[name] = tuple(cols)
        e = {key: item[key] for key in ("name", "origin", "terminus", "inverse") if key in item}
        e["weight"] = len(cols)
        edges.append(e)
    try:
        graph = validate_graph({"vertices": vids, "edges": edges})
    except GraphError as exc:
        raise DiagramError(f"graph: {exc}") from None
    groups = {}
    for c in graph.vertices:
        xc = tuple(x for a in graph.out_edges(c) for x in colors[a])
        blocks = [colors[a] for a in graph.out_edges(c)]
        spec, where = _group_spec(raw, c, vids.index(c))
        grp = _build_group(spec, where, xc, blocks, cap)
        got = sorted(sorted(o) for o in grp.orbits())
        want = sorted(sorted(b) for b in blocks)
        if got != want:
            raise DiagramError(f"{where}: orbit mismatch at vertex {c}: orbits {got}, expected {want}")
        groups[c] = grp
    d = LocalActionDiagram(graph, colors, groups)
    if "inversion" in raw and raw["inversion"] is not None:
        d.inversion = validate_inversion(d, raw["inversion"])
    else:
        d.inversion = default_inversion(graph, d.colors)
    return d


def load_lad(path: str) -> LocalActionDiagram:
    with open(path) as fh:
        return validate_lad(json.load(fh))


def lad_to_raw(d: LocalActionDiagram) -> dict:
    g = d.graph
    return {
        "vertices": list(g.vertices),
        "edges": [{"name": a, "origin": g.origin[a], "terminus": g.terminus(a),
                   "inverse": g.inverse[a], "colors": list(d.colors[a])} for a in g.edges],
        "groups": {c: {"generators": [p.as_mapping() for p in d.groups[c].generators]}
                   for c in g.vertices},
        "inversion": dict(d.inversion) if d.inversion is not None else None,
    }


def make_diagram(graph: WeightedGraph, gens_for_block, inversion=None, cap: int = DEFAULT_CAP) -> LocalActionDiagram:
    """Diagram with X_a = {a:0, …} and G(c) generated block by block."""
    colors = {a: tuple(f"{a}:{i}" for i in range(graph.weight[a])) for a in graph.edges}
    groups = {}
    for c in graph.vertices:
        xc = tuple(x for a in graph.out_edges(c) for x in colors[a])
        gens = []
        for a in graph.out_edges(c):
            gens.extend(gens_for_block(a, colors[a]))
        groups[c] = PermGroup(xc, gens, cap)
    d = LocalActionDiagram(graph, colors, groups)
    d.inversion = inversion if inversion is not None else modular_inversion(graph, colors)
    return d


def full_symmetric_diagram(graph: WeightedGraph, inversion=None) -> LocalActionDiagram:
    return make_diagram(graph, lambda a, block: symmetric_generators(block), inversion)


def cyclic_diagram(graph: WeightedGraph, inversion=None) -> LocalActionDiagram:
    return make_diagram(graph, lambda a, block: cyclic_generators(block), inversion)


def dihedral_diagram(graph: WeightedGraph, inversion=None) -> LocalActionDiagram:
    return make_diagram(graph, lambda a, block: dihedral_generators(block), inversion)


def sl2_diagram(p: int) -> LocalActionDiagram:
    """1-segment with X_a = X_ā = P¹(F_p) and PSL₂(F_p) at both ends."""
    from .graph_core import make_graph
    from .perm_groups import projective_line

    g = make_graph(["c", "d"], [("a", "ab", "c", "d", p + 1, p + 1)])
    pts = projective_line(p)
    colors = {"a": tuple(f"a:{z}" for z in pts), "ab": tuple(f"ab:{z}" for z in pts)}
    groups = {"c": PermGroup(colors["a"], psl2_generators(p, colors["a"])),
              "d": PermGroup(colors["ab"], psl2_generators(p, colors["ab"]))}
    d = LocalActionDiagram(g, colors, groups)
    d.inversion = default_inversion(g, colors)
    return d


def wlit_companion(d: LocalActionDiagram) -> LocalActionDiagram:
    """Same Γ, colours and ι; each G(c) replaced by the block-preserving symmetric group."""
    g = d.graph
    groups = {}
    for c in g.vertices:
        xc = d.vertex_colors(c)
        groups[c] = block_symmetric_group(xc, [d.colors[a] for a in g.out_edges(c)])
    out = LocalActionDiagram(g, d.colors, groups, d.inversion)
    return out


# -- weights ------------------------------------------------------------------------

def weight_W(d: LocalActionDiagram, iota, x: str, y: str) -> int:
    """|G(t(a))_{ι(x)} · y| if t(a) = o(b), else 0."""
    d.check_color(x)
    d.check_color(y)
    iota = d.iota(iota)
    cached = iota is d.inversion
    if cached and (x, y) in d._w_cache:
        return d._w_cache[(x, y)]
    g = d.graph
    a, b = d.edge_of[x], d.edge_of[y]
    c = g.terminus(a)
    val = d.groups[c].stab_orbit_size(iota[x], y) if c == g.origin[b] else 0
    if cached:
        d._w_cache[(x, y)] = val
    return val


def weight_W_rev(d: LocalActionDiagram, x: str, y: str) -> int:
    """|G(o(a))_x · y| if o(a) = o(b), else 0."""
    d.check_color(x)
    d.check_color(y)
    key = (x, y)
    if key not in d._wrev_cache:
        g = d.graph
        a, b = d.edge_of[x], d.edge_of[y]
        c = g.origin[a]
        d._wrev_cache[key] = d.groups[c].stab_orbit_size(x, y) if c == g.origin[b] else 0
    return d._wrev_cache[key]


def delta_path_weight(d: LocalActionDiagram, iota, xi) -> int:
    cols = xi.colors if isinstance(xi, DeltaPath) else tuple(xi)
    w = 1
    for x, y in zip(cols, cols[1:]):
        w *= weight_W(d, iota, x, y)
    return w


def reduced_successors(d: LocalActionDiagram, iota, x: str) -> list:
    """Colours y with t(a) = o(b) and y ≠ ι(x)."""
    iota = d.iota(iota)
    g = d.graph
    c = g.terminus(d.edge_of[x])
    return [y for y in d.vertex_colors(c) if y != iota[x]]


def underlying_path(d: LocalActionDiagram, xi: DeltaPath) -> Path:
    if not xi.colors:
        return Path(xi.anchor)
    edges = tuple(d.edge_of[x] for x in xi.colors)
    return Path(d.graph.origin[edges[0]], edges)


def is_reduced_delta(d: LocalActionDiagram, iota, cols) -> bool:
    iota = d.iota(iota)
    g = d.graph
    for x, y in zip(cols, cols[1:]):
        if g.terminus(d.edge_of[x]) != g.origin[d.edge_of[y]] or y == iota[x]:
            return False
    return True


def enumerate_reduced_delta_paths(d: LocalActionDiagram, iota, start, max_len: int) -> Iterator[DeltaPath]:
    """Reduced Δ-paths of length ≤ max_len in (length, colour order) order.

    start is a vertex (0-path plus paths beginning in X_c), a colour, or a
    collection of colours.
    """
    iota = d.iota(iota)
    if max_len < 0:
        return
    if isinstance(start, str) and d.graph.is_vertex(start):
        yield DeltaPath((), start)
        firsts = d.vertex_colors(start)
    elif isinstance(start, str):
        d.check_color(start)
        firsts = (start,)
    else:
        firsts = sorted(start, key=d.pos.__getitem__)
    layer = [(x,) for x in firsts]
    n = 1
    while layer and n <= max_len:
        for cols in layer:
            yield DeltaPath(cols)
        if n == max_len:
            break
        layer = [cols + (y,) for cols in layer for y in reduced_successors(d, iota, cols[-1])]
        n += 1


def condition_diamond(d: LocalActionDiagram, c: str) -> bool:
    """Stab(x) is transitive on X_b ∖ {x} for all a, b ∈ o⁻¹(c) and x ∈ X_a."""
    grp = d.groups[c]
    g = d.graph
    for a in g.out_edges(c):
        for x in d.colors[a]:
            orbs = grp.stabilizer_orbits(x)
            for b in g.out_edges(c):
                rest = frozenset(d.colors[b]) - {x}
                if rest and not any(rest <= o for o in orbs):
                    return False
    return True


def _check_pclosed_liftable(d: LocalActionDiagram) -> None:
    for a in d.graph.edges:
        if len(d.colors[a]) < 2:
            raise SettingError(f"|X_{a}| = {len(d.colors[a])} < 2")


def _unit_transitions(d: LocalActionDiagram, iota) -> dict:
    return {x: [y for y in reduced_successors(d, iota, x) if weight_W(d, iota, x, y) == 1]
            for x in d.order}


def star_k_pclosed(d: LocalActionDiagram, iota, k: int) -> bool:
    """Every reduced Δ-path of length k+1 has W ≥ 2 (searched over unit steps only)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_pclosed_liftable(d)
    succ = _unit_transitions(d, iota)
    frontier = set(d.order)
    for _ in range(k):
        frontier = {y for x in frontier for y in succ[x]}
        if not frontier:
            return True
    return False


def star_k_pclosed_brute(d: LocalActionDiagram, iota, k: int) -> bool:
    _check_pclosed_liftable(d)
    for x in d.order:
        for xi in enumerate_reduced_delta_paths(d, iota, x, k + 1):
            if len(xi) == k + 1 and delta_path_weight(d, iota, xi) < 2:
                return False
    return True


def min_star_k_pclosed(d: LocalActionDiagram, iota=None) -> int | None:
    _check_pclosed_liftable(d)
    succ = _unit_transitions(d, iota)
    frontier = set(d.order)
    for k in range(1, len(d.order) ** 2 + 3):
        frontier = {y for x in frontier for y in succ[x]}
        if not frontier:
            return k
    return None


def setting_pclosed_ok(d: LocalActionDiagram, iota=None) -> bool:
    try:
        return min_star_k_pclosed(d, iota) is not None
    except SettingError:
        return False


# -- the operator F(s) and the (P)-closed zeta function -----------------------------------

def _check_site(d: LocalActionDiagram, c0: str, r: str, u: str) -> None:
    g = d.graph
    if not g.is_vertex(c0):
        raise DiagramError(f"root {c0} is not a vertex")
    if r != ROOT:
        d.check_color(r)
        if g.origin[d.edge_of[r]] != c0:
            raise DiagramError(f"colour {r} is not in X of {c0}")
    g.site(u)


def _f_rows(d: LocalActionDiagram, iota, pw, zero) -> list:
    n = len(d.order)
    rows = [[zero] * n for _ in range(n)]
    for x in d.order:
        i = d.pos[x]
        for y in reduced_successors(d, iota, x):
            rows[i][d.pos[y]] = pw(weight_W(d, iota, x, y))
    return rows


def _y_boundary(d: LocalActionDiagram, iota, c0, r, u, pw, zero, f_rows) -> tuple:
    n = len(d.order)
    col = [zero] * n
    for x in d.capital_colors(u):
        col[d.pos[x]] += 1
    row = [zero] * n
    g = d.graph
    if r == ROOT:
        for a in g.out_edges(c0):
            for x in d.colors[a]:
                row[d.pos[x]] += pw(g.weight[a])
    else:
        i = d.pos[r]
        row = list(f_rows[i])
        for y in d.vertex_colors(c0):
            if y != r:
                row[d.pos[y]] += pw(weight_W_rev(d, r, y))
    return col, row


def bass_F(d: LocalActionDiagram, iota, s) -> Matrix:
    """F(s)(x,y) = W(x,y)^(-s) if composable and y ≠ ι(x), else 0."""
    mode = exponent_mode(s)
    return Matrix(_f_rows(d, iota, lambda m: neg_power(m, s), la.coerce(0, mode)), d.order, mode)


def perturbation_Y(d: LocalActionDiagram, iota, c0: str, r: str, u: str, s) -> Matrix:
    _check_site(d, c0, r, u)
    mode = exponent_mode(s)
    zero = la.coerce(0, mode)
    pw = lambda m: neg_power(m, s)  # noqa: E731
    col, row = _y_boundary(d, iota, c0, r, u, pw, zero, _f_rows(d, iota, pw, zero))
    return la.outer(col, row, mode, d.order)


def eta_term(d: LocalActionDiagram, a: str, u: str) -> int:
    g = d.graph
    if g.is_vertex(u):
        return 1 if u in (g.origin[a], g.terminus(a)) else 0
    return 1 if u in (a, g.inverse[a]) else 0


def kappa_term(d: LocalActionDiagram, c0: str, r: str, u: str) -> int:
    """Root: 1_{c0}(u) - 1. Colour x of an edge a: η_a(u) - 1."""
    _check_site(d, c0, r, u)
    if r == ROOT:
        return (1 if u == c0 else 0) - 1
    return eta_term(d, d.edge_of[r], u) - 1


def _poly_system(d: LocalActionDiagram, iota) -> tuple:
    """Ring, F rows and (δ, δ·(I - F)⁻¹) over integer polynomials in p^(-s).

    Shared by every site of the diagram, so it is computed once per inversion.
    """
    key = tuple(sorted(iota.items()))
    hit = d._poly_cache.get(key)
    if hit is not None:
        return hit
    g = d.graph
    nums = [g.weight[a] for a in g.edges]
    nums += [weight_W(d, iota, x, y) for x in d.order for y in reduced_successors(d, iota, x)]
    for c in g.vertices:
        xc = d.vertex_colors(c)
        nums += [weight_W_rev(d, x, y) for x in xc for y in xc if x != y]
    pr = la.PowerRing(nums)
    zero = pr.ring.zero
    f_rows = _f_rows(d, iota, pr.power, zero)
    n = len(d.order)
    base = [[(pr.ring.one if i == j else zero) - f_rows[i][j] for j in range(n)] for i in range(n)]
    delta, adj = la.poly_adjugate(base)
    out = (pr, f_rows, delta, adj)
    d._poly_cache[key] = out
    return out


def _symbolic_ratio(d: LocalActionDiagram, iota, c0, r, u, s1) -> tuple:
    """det(I - F + col·row) / det(I - F) = (δ + row·adj·col) / δ, reduced, at s1."""
    pr, f_rows, delta, adj = _poly_system(d, iota)
    zero = pr.ring.zero
    col, row = _y_boundary(d, iota, c0, r, u, pr.power, zero, f_rows)
    n = len(d.order)
    hits = [j for j in range(n) if col[j]]
    extra = zero
    for i in range(n):
        if row[i]:
            extra += row[i] * sum((adj[i][j] * col[j] for j in hits), zero)
    return la.poly_ratio(pr, delta + extra, delta, s1)


def zeta_pclosed(d: LocalActionDiagram, iota, c0: str, r: str, u: str, s,
                 require_setting: bool = True) -> ZetaValue:
    """det(I - F(s+1) + Y(s+1)) / det(I - F(s+1)) + κ, at the double-coset variable s."""
    iota = d.iota(iota)
    _check_site(d, c0, r, u)
    ok = setting_pclosed_ok(d, iota)
    if require_setting and not ok:
        raise SettingError("diagram violates the (P)-closed growth setting")
    s1 = s + 1
    mode = exponent_mode(s)
    f = bass_F(d, iota, s1)
    base = la.identity(f.dim, mode, d.order) - f
    num_m = base + perturbation_Y(d, iota, c0, r, u, s1)
    den = la.det(base)
    num = la.det(num_m)
    kappa = la.coerce(kappa_term(d, c0, r, u), mode)
    formal = not ok
    if mode == EXACT:
        if den == 0 and num == 0:
            num, den = _symbolic_ratio(d, iota, c0, r, u, s1)
        return _finish(num, den, kappa, formal, mode)
    if la.is_pole_candidate(base, den):
        if la.is_pole_candidate(num_m, num):
            num, den = _symbolic_ratio(d, iota, c0, r, u, s1)
            return _finish(num, den, kappa, formal, mode)
        return ZetaValue(None, is_pole_candidate=True, formal=formal, numerator=num, denominator=den)
    return ZetaValue(num / den + kappa, formal=formal, numerator=num, denominator=den)


def _grouped_paths(d: LocalActionDiagram, iota, starts: dict, targets: frozenset, max_len: int) -> dict:
    """weight -> number of reduced Δ-paths of length ≤ max_len ending in targets.

    starts maps a first colour to its multiplicity. Paths are grouped by
    (last colour, W) while extended.
    """
    out = defaultdict(int)
    layer = defaultdict(int)
    for x, m in starts.items():
        layer[(x, 1)] += m
    n = 1
    while layer and n <= max_len:
        for (x, w), cnt in layer.items():
            if x in targets:
                out[w] += cnt
        if n == max_len:
            break
        nxt = defaultdict(int)
        for (x, w), cnt in layer.items():
            for y in reduced_successors(d, iota, x):
                nxt[(y, w * weight_W(d, iota, x, y))] += cnt
        layer = nxt
        n += 1
    return out


def series_by_paths_pclosed(d: LocalActionDiagram, iota, c0, r, u, s, L: int):
    """Partial sum over tree paths of length ≤ L, from grouped reduced Δ-paths."""
    iota = d.iota(iota)
    _check_site(d, c0, r, u)
    mode = exponent_mode(s)
    s1 = s + 1
    g = d.graph
    targets = d.capital_colors(u)
    acc = la.coerce(0, mode)
    if r == ROOT:
        if u == c0:
            acc += 1
        for a in g.out_edges(c0):
            counts = _grouped_paths(d, iota, {x: 1 for x in d.colors[a]}, targets, L)
            for w, cnt in counts.items():
                acc += cnt * neg_power(g.weight[a], s1) * neg_power(w, s1)
        return acc
    acc += eta_term(d, d.edge_of[r], u)
    counts = _grouped_paths(d, iota, {r: 1}, targets, L)
    # drop the length-one path (r) itself
    if r in targets:
        counts[1] -= 1
    for w, cnt in counts.items():
        acc += cnt * neg_power(w, s1)
    for y in d.vertex_colors(c0):
        if y == r:
            continue
        wr = neg_power(weight_W_rev(d, r, y), s1)
        for w, cnt in _grouped_paths(d, iota, {y: 1}, targets, L - 1).items():
            acc += cnt * wr * neg_power(w, s1)
    return acc


def series_by_matrix_pclosed(d: LocalActionDiagram, iota, c0, r, u, s, L: int):
    """Same partial sum from powers of F(s+1)."""
    iota = d.iota(iota)
    _check_site(d, c0, r, u)
    mode = exponent_mode(s)
    s1 = s + 1
    f = bass_F(d, iota, s1)
    n = len(d.order)
    zero = la.coerce(0, mode)
    col = [zero] * n
    for x in d.capital_colors(u):
        col[d.pos[x]] += 1
    g = d.graph
    if r == ROOT:
        acc = la.coerce(1 if u == c0 else 0, mode)
        if L == 0:
            return acc
        row = [zero] * n
        for a in g.out_edges(c0):
            for x in d.colors[a]:
                row[d.pos[x]] += neg_power(g.weight[a], s1)
        return acc + la.dot(la.vector_neumann(row, f, 0, L - 1), col, mode)
    acc = la.coerce(eta_term(d, d.edge_of[r], u), mode)
    if L >= 2:
        fx = [zero] * n
        fx[d.pos[r]] += 1
        acc += la.dot(la.vector_neumann(fx, f, 1, L - 1), col, mode)
        rev = [zero] * n
        for y in d.vertex_colors(c0):
            if y != r:
                rev[d.pos[y]] += neg_power(weight_W_rev(d, r, y), s1)
        acc += la.dot(la.vector_neumann(rev, f, 0, L - 2), col, mode)
    return acc


def zeta_pclosed_series(d: LocalActionDiagram, iota, c0: str, r: str, u: str, s, L: int, tol: float = 1e-9):
    """Partial series at horizon L, computed by paths and by F-powers; they must agree."""
    from .zeta_wlit import SeriesMismatch

    if L < 0:
        raise ValueError("L must be >= 0")
    by_paths = series_by_paths_pclosed(d, iota, c0, r, u, s, L)
    by_matrix = series_by_matrix_pclosed(d, iota, c0, r, u, s, L)
    if exponent_mode(s) == EXACT:
        if by_paths != by_matrix:
            raise SeriesMismatch(f"path sum {by_paths} != matrix sum {by_matrix}")
    elif abs(by_paths - by_matrix) > tol * max(1.0, abs(by_paths)):
        raise SeriesMismatch(f"path sum {by_paths} != matrix sum {by_matrix}")
    return by_paths


def site_pairs(d: LocalActionDiagram, c0: str) -> list:
    """All (r, u) with r the root or a colour in X_{c0}, u any vertex or edge."""
    g = d.graph
    rs = [ROOT] + list(d.vertex_colors(c0))
    return [(r, u) for r in rs for u in list(g.vertices) + list(g.edges)]


def wlit_site(d: LocalActionDiagram, c0: str, r: str) -> str:
    """The Γ-site matching r: c0 for the root, the colour's edge otherwise."""
    return c0 if r == ROOT else d.edge_of[r]


# -- the truncated standard Δ-tree ----------------------------------------------------

@dataclass
class TruncatedDeltaTree:
    """Vertices are reduced Δ-paths (colour tuples) from X_{c0} of length ≤ depth.

    Vertices get integer ids; every positive edge (v, v·x) is stored with its
    label x and its reverse with label ι(x).
    """

    diagram: LocalActionDiagram
    iota: dict
    c0: str
    depth: int
    paths: list = field(default_factory=list)          # id -> colour tuple
    out: list = field(default_factory=list)            # id -> [(label, neighbour id, positive)]

    def projection(self, v: int) -> str:
        p = self.paths[v]
        return self.c0 if not p else self.diagram.graph.terminus(self.diagram.edge_of[p[-1]])


def build_truncated_tree(d: LocalActionDiagram, iota, c0: str, L: int, cap: int = TREE_CAP) -> TruncatedDeltaTree:
    if L < 1:
        raise ValueError("L must be >= 1")
    iota = d.iota(iota)
    t = TruncatedDeltaTree(d, iota, c0, L)
    t.paths.append(())
    t.out.append([])
    layer = [0]
    for depth in range(1, L + 1):
        nxt = []
        for v in layer:
            p = t.paths[v]
            cands = d.vertex_colors(c0) if not p else reduced_successors(d, iota, p[-1])
            for x in cands:
                w = len(t.paths)
                if w >= cap:
                    raise DiagramError(f"truncated tree exceeds {cap} vertices")
                t.paths.append(p + (x,))
                t.out.append([(iota[x], v, False)])
                t.out[v].append((x, w, True))
                nxt.append(w)
        layer = nxt
    return t


@dataclass
class TreeReport:
    labels_ok: bool
    edge_counts_ok: bool
    vertex_counts_ok: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.labels_ok and self.edge_counts_ok and self.vertex_counts_ok


def _walks(t: TruncatedDeltaTree, v: int, back: int | None, max_len: int, prefix: tuple, edge_pi, sink) -> None:
    """Non-backtracking walks from v; sink receives (labels, π-edges) of each nonempty walk."""
    if len(prefix[0]) >= max_len:
        return
    for label, w, positive in t.out[v]:
        if w == back:
            continue
        labels = prefix[0] + (label,)
        pis = prefix[1] + (edge_pi(v, w, positive),)
        sink(labels, pis)
        _walks(t, w, v, max_len, (labels, pis), edge_pi, sink)


def oracle_check_tree(t: TruncatedDeltaTree) -> TreeReport:
    """Check labels, edge lift counts (N_edg) and vertex lift counts (N_vert) on the tree."""
    d, iota, g = t.diagram, t.iota, t.diagram.graph
    failures = []

    def edge_pi(v, w, positive):
        a = d.edge_of[t.paths[w][-1]] if positive else d.edge_of[t.paths[v][-1]]
        return a if positive else g.inverse[a]

    # (a) labels of root geodesics are exactly the reduced Δ-paths, without repeats
    seen = []
    _walks(t, 0, None, t.depth, ((), ()), edge_pi, lambda labels, pis: seen.append(labels))
    expected = {xi.colors for xi in enumerate_reduced_delta_paths(d, iota, t.c0, t.depth) if xi.colors}
    labels_ok = len(seen) == len(set(seen)) and set(seen) == expected
    if not labels_ok:
        failures.append("label map is not a bijection onto reduced Δ-paths")

    # (c) vertex counts from the root
    root_counts = defaultdict(int)
    _walks(t, 0, None, t.depth, ((), ()), edge_pi, lambda labels, pis: root_counts.__setitem__(pis, root_counts[pis] + 1))
    vertex_ok = True
    for p in enumerate_paths(g, t.c0, t.depth):
        if p.edges and root_counts.get(p.edges, 0) != n_vert(g, p):
            vertex_ok = False
            failures.append(f"root: path {p.edges} lifts {root_counts.get(p.edges, 0)} times, N_vert={n_vert(g, p)}")
            break

    # (b) edge counts from every positive edge
    edge_ok = True
    for v in range(len(t.paths)):
        for label, w, positive in t.out[v]:
            if not positive:
                continue
            room = t.depth - len(t.paths[w]) + 1
            a = d.edge_of[label]
            counts = defaultdict(int)
            counts[(a,)] += 1
            _walks(t, w, v, room, ((label,), (a,)), edge_pi,
                   lambda labels, pis: counts.__setitem__(pis, counts[pis] + 1))
            for p in enumerate_paths(g, a, room):
                if counts.get(p.edges, 0) != n_edg(g, p):
                    edge_ok = False
                    failures.append(f"edge {t.paths[w]}: path {p.edges} lifts {counts.get(p.edges, 0)} "
                                    f"times, N_edg={n_edg(g, p)}")
                    break
            if not edge_ok:
                break
        if not edge_ok:
            break
    return TreeReport(labels_ok, edge_ok, vertex_ok, failures)


def count_delta_paths_over(d: LocalActionDiagram, iota, x: str, p: Path) -> int:
    """Reduced Δ-paths from x whose underlying path is p."""
    iota = d.iota(iota)
    if not p.edges or d.edge_of[x] != p.edges[0]:
        return 0
    layer = {x: 1}
    for b in p.edges[1:]:
        nxt = defaultdict(int)
        for y, cnt in layer.items():
            for z in d.colors[b]:
                if z != iota[y]:
                    nxt[z] += cnt
        layer = nxt
    return sum(layer.values())
