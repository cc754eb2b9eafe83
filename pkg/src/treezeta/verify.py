"""Randomized verification suites.

Each suite maps (seed, index) to a list of result lines. Instances are
independent, so they can run in a process pool; output stays in index order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from . import generators as gen
from .euler_ihara import (NotUnimodular, verify_chi_relations, verify_chi_reciprocal,
                          verify_ihara_ratio)
from .graph_core import WeightedGraph, make_graph
from .lad import (build_truncated_tree, full_symmetric_diagram, oracle_check_tree, site_pairs,
                  star_k_pclosed, star_k_pclosed_brute, wlit_companion, wlit_site, zeta_pclosed)
from .weighted_paths import SettingError, star_k_wlit, star_k_wlit_brute
from .zeta_wlit import (HypothesisError, IndeterminateError, PoleError, verify_splitting, zeta_det)

REL_TOL = 1e-9
SKIPPABLE = (PoleError, IndeterminateError)


@dataclass
class Outcome:
    lines: list = field(default_factory=list)
    failures: int = 0
    skips: int = 0
    exact: int = 0
    approx: int = 0

    def check(self, label: str, lhs, rhs) -> bool:
        ok, exact = compare(lhs, rhs)
        mark = "" if exact else " ~"
        if ok:
            self.lines.append(f"OK{mark} {label}")
            if exact:
                self.exact += 1
            else:
                self.approx += 1
        else:
            self.failures += 1
            self.lines.append(f"FAIL {label} lhs={fmt(lhs)} rhs={fmt(rhs)}")
        return ok

    def flag(self, label: str, ok: bool, detail: str = "") -> None:
        if ok:
            self.exact += 1
            self.lines.append(f"OK {label}")
        else:
            self.failures += 1
            self.lines.append(f"FAIL {label} {detail}".rstrip())

    def skip(self, label: str, reason: str) -> None:
        self.skips += 1
        self.lines.append(f"SKIP {label}: {reason}")

    def merge(self, other: "Outcome", prefix: str = "") -> None:
        self.lines.extend(prefix + ln for ln in other.lines)
        self.failures += other.failures
        self.skips += other.skips
        self.exact += other.exact
        self.approx += other.approx


def _is_exact(x) -> bool:
    return isinstance(x, (Rational, bool))


def compare(lhs, rhs) -> tuple:
    """(equal, compared exactly)."""
    if _is_exact(lhs) and _is_exact(rhs):
        return Fraction(lhs) == Fraction(rhs), True
    a, b = complex(lhs), complex(rhs)
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b)), False


def fmt(x) -> str:
    """Exact values as p/q; others as re±im i with 15 significant digits."""
    if x is None:
        return "pole"
    if isinstance(x, bool):
        return str(x)
    if _is_exact(x):
        return str(Fraction(x))
    z = complex(x)
    if z.imag == 0:
        return f"{z.real:.15g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.15g}{sign}{abs(z.imag):.15g}i"


def describe(g: WeightedGraph) -> str:
    parts = [f"{a}:{g.origin[a]}->{g.terminus(a)}({g.weight[a]},{g.weight[g.inverse[a]]})"
             for a in g.edge_pairs()]
    return " ".join(parts)


# -- suites ---------------------------------------------------------------------------------

SPLIT_S = (-1, 2, 3)


def suite_splitting(seed: int, index: int) -> Outcome:
    kinds = list(gen.SPLIT_KINDS)
    kind = kinds[index % len(kinds)]
    rng = gen.instance_rng(seed, index, "splitting")
    g, parts, site = gen.SPLIT_KINDS[kind](rng)
    out = Outcome()
    for s in SPLIT_S:
        label = f"{kind} site={site} s={s}"
        try:
            vals = verify_splitting(kind, g, parts, site, s)
        except SKIPPABLE as e:
            out.skip(label, str(e))
            continue
        if len(vals) == 2:
            out.check(label, *vals)
        else:
            out.check(label + " at o(a)", vals[0], vals[1])
            out.check(label + " at a", vals[2], vals[3])
    return out


def suite_chi_reciprocal(seed: int, index: int) -> Outcome:
    g = gen.unimodular_tree_with_loops(gen.instance_rng(seed, index, "chi-reciprocal"))
    out = Outcome()
    for c in verify_chi_reciprocal(g):
        out.check(c.label, c.lhs, c.rhs)
    return out


def suite_chi_relations(seed: int, index: int) -> Outcome:
    rng = gen.instance_rng(seed, index, "chi")
    if index % 2:
        g = gen.random_spec(rng, rng.randint(1, 5), symmetric=True).build()
    else:
        g = gen.unimodular_tree_with_loops(rng, 5)
    out = Outcome()
    for c in verify_chi_relations(g):
        out.check(c.label, c.lhs, c.rhs)
    return out


def suite_ihara_ratio(seed: int, index: int) -> Outcome:
    rng = gen.instance_rng(seed, index, "ihara-ratio")
    g, g1, g2, a = gen.segment_join_instance(rng, tree=index % 5 != 4)
    out = Outcome()
    try:
        res = verify_ihara_ratio(g, g1, g2, a)
    except SKIPPABLE as e:
        out.skip(f"ratio-det {describe(g)}", str(e))
        return out
    out.check(f"ratio-det {describe(g)}", res.lhs, res.rhs)
    if res.chi_lhs is not None:
        out.check(f"ratio-chi {describe(g)}", res.chi_lhs, res.chi_rhs)
    return out


def suite_companion_minus1(seed: int, index: int) -> Outcome:
    d = gen.non_full_diagram(gen.instance_rng(seed, index, "companion-minus1"))
    comp = wlit_companion(d)
    out = Outcome()
    for c0 in d.graph.vertices:
        for r, u in site_pairs(d, c0):
            label = f"companion c0={c0} r={r} u={u}"
            try:
                a = zeta_pclosed(d, d.iota(), c0, r, u, -1)
                b = zeta_pclosed(comp, comp.iota(), c0, r, u, -1)
            except SKIPPABLE as e:
                out.skip(label, str(e))
                continue
            if a.is_pole or b.is_pole:
                out.flag(label + " pole", a.is_pole == b.is_pole)
                continue
            out.check(label, a.value, b.value)
    return out


def coherence_check(d, s_values=(-1, 2, 3), c0s=None) -> Outcome:
    """zeta_pclosed on a full-symmetric diagram against zeta_det on its graph."""
    g = d.graph
    out = Outcome()
    for c0 in c0s or g.vertices:
        for r, u in site_pairs(d, c0):
            w = wlit_site(d, c0, r)
            for s in s_values:
                label = f"coherence c0={c0} r={r} u={u} s={fmt(s)}"
                try:
                    a = zeta_pclosed(d, d.iota(), c0, r, u, s)
                    b = zeta_det(g, w, u, s)
                except SKIPPABLE as e:
                    out.skip(label, str(e))
                    continue
                if a.is_pole or b.is_pole or a.is_pole_candidate or b.is_pole_candidate:
                    out.flag(label + " pole", (a.is_pole or a.is_pole_candidate) == (b.is_pole or b.is_pole_candidate))
                    continue
                out.check(label, a.value, b.value)
    return out


def pick_depth(d, c0: str, max_depth: int = 5, max_vertices: int = 20000) -> int:
    L = max_depth
    while L > 1 and gen.tree_size(d, c0, L) > max_vertices:
        L -= 1
    return L


def suite_tree_oracle(seed: int, index: int) -> Outcome:
    rng = gen.instance_rng(seed, index, "tree")
    d = gen.random_diagram(rng, max_pairs=3, lo=2, hi=3, random_iota=index % 2 == 1)
    c0 = rng.choice(d.graph.vertices)
    L = pick_depth(d, c0)
    rep = oracle_check_tree(build_truncated_tree(d, d.iota(), c0, L))
    out = Outcome()
    tag = f"c0={c0} L={L}"
    out.flag(f"labels {tag}", rep.labels_ok, "; ".join(rep.failures[:3]))
    out.flag(f"edge-counts {tag}", rep.edge_counts_ok, "; ".join(rep.failures[:3]))
    out.flag(f"vertex-counts {tag}", rep.vertex_counts_ok, "; ".join(rep.failures[:3]))
    return out


def closed_star(g: WeightedGraph, k: int) -> bool | None:
    """The closed conditions for k = 1, 2; None for other k."""
    if k == 1:
        return all(g.weight[a] >= 3 for a in g.edges)
    if k == 2:
        return all(g.weight[a] >= 3 or g.weight[g.inverse[a]] >= 3 for a in g.edges)
    return None


def star_checks(g: WeightedGraph, out: Outcome, with_diagram: bool, ks=(1, 2, 3)) -> None:
    tag = describe(g)
    for k in ks:
        brute = star_k_wlit_brute(g, k)
        out.check(f"star{k} frontier {tag}", star_k_wlit(g, k), brute)
        closed = closed_star(g, k)
        if closed is not None:
            out.check(f"star{k} closed {tag}", closed, brute)
        if with_diagram:
            d = full_symmetric_diagram(g)
            out.check(f"star{k} diagram {tag}", star_k_pclosed_brute(d, d.iota(), k), brute)
            out.check(f"star{k} diagram-frontier {tag}", star_k_pclosed(d, d.iota(), k), brute)


def suite_star_consistency(seed: int, index: int) -> Outcome:
    rng = gen.instance_rng(seed, index, "star")
    g = gen.random_spec(rng, rng.randint(1, 3), lo=2, hi=4).build()
    lo_pairs = rng.sample(list(g.edge_pairs()), rng.randint(0, len(g.edge_pairs())))
    weights = dict(g.weight)
    for a in lo_pairs:
        weights[a] = weights[g.inverse[a]] = 2
    g = g.with_weights(weights)
    out = Outcome()
    star_checks(g, out, with_diagram=sum(g.weight.values()) <= 14)
    return out


SUITES = {
    "splitting": suite_splitting,
    "chi-reciprocal": suite_chi_reciprocal,
    "ihara-ratio": suite_ihara_ratio,
    "companion-minus1": suite_companion_minus1,
    "tree-oracle": suite_tree_oracle,
    "chi-relations": suite_chi_relations,
    "star-consistency": suite_star_consistency,
}


def _run_one(args) -> Outcome:
    name, seed, index = args
    try:
        return SUITES[name](seed, index)
    except (HypothesisError, SettingError, NotUnimodular) as e:
        out = Outcome()
        out.flag(f"hypotheses", False, f"{type(e).__name__}: {e}")
        return out


def run_suite(name: str, seed: int = 0, instances: int = 20, jobs: int = 1, start: int = 0) -> Outcome:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name}")
    tasks = [(name, seed, i) for i in range(start, start + instances)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    total = Outcome()
    for (_, _, i), res in zip(tasks, results):
        total.merge(res, prefix=f"[{i}] ")
    return total


# -- exhaustive (∗_k) enumeration ----------------------------------------------------------

STAR_SHAPES = {
    "segment": (["c", "d"], [("a", "ab", "c", "d")]),
    "loop": (["c"], [("a", "ab", "c", "c")]),
    "path2": (["c", "d", "e"], [("a", "ab", "c", "d"), ("b", "bb", "d", "e")]),
    "segment+loop": (["c", "d"], [("a", "ab", "c", "d"), ("l", "lb", "d", "d")]),
    "bouquet2": (["c"], [("a", "ab", "c", "c"), ("b", "bb", "c", "c")]),
    "digon": (["c", "d"], [("a", "ab", "c", "d"), ("b", "bb", "c", "d")]),
    "star3": (["c", "d", "e", "f"], [("a", "ab", "c", "d"), ("b", "bb", "c", "e"), ("e3", "e3b", "c", "f")]),
    "triangle": (["c", "d", "e"], [("a", "ab", "c", "d"), ("b", "bb", "d", "e"), ("e3", "e3b", "e", "c")]),
    "path4": (["c", "d", "e", "f", "h"],
              [("a", "ab", "c", "d"), ("b", "bb", "d", "e"), ("e3", "e3b", "e", "f"), ("e4", "e4b", "f", "h")]),
    "star3+loop": (["c", "d", "e", "f"],
                   [("a", "ab", "c", "d"), ("b", "bb", "c", "e"), ("e3", "e3b", "c", "f"), ("l", "lb", "c", "c")]),
}


def weight_assignments(shape: str, lo: int = 2, hi: int = 4):
    verts, pairs = STAR_SHAPES[shape]
    for ws in itertools.product(range(lo, hi + 1), repeat=2 * len(pairs)):
        yield make_graph(verts, [p + (ws[2 * i], ws[2 * i + 1]) for i, p in enumerate(pairs)])
