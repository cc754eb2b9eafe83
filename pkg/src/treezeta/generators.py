"""Seeded random instances for the verification suites.

Every generator takes a random.Random and returns plain data built from
make_graph, so an instance is reproducible from (seed, index).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph_core import WeightedGraph, make_graph
from .lad import LocalActionDiagram, make_diagram, setting_pclosed_ok
from .perm_groups import cyclic_generators, dihedral_generators, symmetric_generators


def instance_rng(seed: int, index: int, salt: str = "") -> random.Random:
    return random.Random(f"{seed}:{salt}:{index}")


def _weights(rng: random.Random, lo: int, hi: int, symmetric: bool = False) -> tuple:
    wa = rng.randint(lo, hi)
    wb = wa if symmetric else rng.randint(lo, hi)
    if wa < 3 and wb < 3:
        if symmetric:
            wa = wb = 3
        elif rng.random() < 0.5:
            wa = 3
        else:
            wb = 3
    return wa, wb


@dataclass
class GraphSpec:
    """Vertices and edge pairs (a, ā, o, t, ω(a), ω(ā)) before validation."""

    vertices: list
    pairs: list

    def build(self) -> WeightedGraph:
        return make_graph(self.vertices, self.pairs)

    def sub(self, vertices, pair_names) -> "GraphSpec":
        keep = set(pair_names)
        return GraphSpec(sorted(vertices), [p for p in self.pairs if p[0] in keep])


def random_spec(rng: random.Random, pairs: int, prefix: str = "", lo: int = 2, hi: int = 5,
                loops: bool = True, symmetric: bool = False, tree: bool = False) -> GraphSpec:
    """Connected graph with the given number of edge pairs; the growth setting holds."""
    n = pairs + 1 if tree else rng.randint(1, pairs + 1)
    verts = [f"{prefix}v{i}" for i in range(n)]
    out = []
    k = 0
    for i in range(1, n):
        j = rng.randrange(i)
        wa, wb = _weights(rng, lo, hi, symmetric)
        out.append((f"{prefix}e{k}", f"{prefix}e{k}r", verts[j], verts[i], wa, wb))
        k += 1
    while k < pairs:
        o = rng.choice(verts)
        t = rng.choice(verts) if (loops and rng.random() < 0.5) or n == 1 else rng.choice([v for v in verts if v != o] or [o])
        if not loops and o == t:
            continue
        wa, wb = _weights(rng, lo, hi, symmetric)
        out.append((f"{prefix}e{k}", f"{prefix}e{k}r", o, t, wa, wb))
        k += 1
    return GraphSpec(verts, out)


def random_graph(rng: random.Random, max_pairs: int = 6, lo: int = 2, hi: int = 5) -> WeightedGraph:
    return random_spec(rng, rng.randint(1, max_pairs), lo=lo, hi=hi).build()


def unimodular_tree_with_loops(rng: random.Random, max_pairs: int = 6, lo: int = 2, hi: int = 5) -> WeightedGraph:
    """A tree with arbitrary Setting-[Γ] weights, decorated with balanced loops (ω ≥ 3)."""
    pairs = rng.randint(1, max_pairs)
    n_loops = rng.randint(0, min(3, pairs))
    spec = random_spec(rng, pairs - n_loops, lo=lo, hi=hi, tree=True) if pairs > n_loops else GraphSpec(["v0"], [])
    for i in range(n_loops):
        w = rng.randint(max(3, lo), max(3, hi))
        v = rng.choice(spec.vertices)
        spec.pairs.append((f"l{i}", f"l{i}r", v, v, w, w))
    return spec.build()


def _rename(spec: GraphSpec, mapping: dict) -> GraphSpec:
    r = lambda x: mapping.get(x, x)  # noqa: E731
    return GraphSpec([r(v) for v in spec.vertices],
                     [(r(a), r(b), r(o), r(t), wa, wb) for a, b, o, t, wa, wb in spec.pairs])


def _glue(*specs: GraphSpec) -> GraphSpec:
    verts, pairs, seen = [], [], set()
    for s in specs:
        for v in s.vertices:
            if v not in verts:
                verts.append(v)
        for p in s.pairs:
            if p[0] not in seen:
                seen.add(p[0])
                pairs.append(p)
    return GraphSpec(verts, pairs)


def _connected_piece(rng: random.Random, spec: GraphSpec, seeds: list, forced_pairs=()) -> GraphSpec:
    """A random connected sub-piece grown from seed vertices; keeps forced pairs."""
    verts = set(seeds)
    grow = rng.randint(0, len(spec.vertices))
    adj = {}
    for p in spec.pairs:
        adj.setdefault(p[2], []).append(p)
        adj.setdefault(p[3], []).append(p)
    for _ in range(grow):
        frontier = [p for v in sorted(verts) for p in adj.get(v, []) if p[2] not in verts or p[3] not in verts]
        if not frontier:
            break
        p = rng.choice(frontier)
        verts.update((p[2], p[3]))
    pairs = [p for p in spec.pairs
             if p[2] in verts and p[3] in verts and (p[0] in forced_pairs or rng.random() < 0.7)]
    # keep it connected: add back tree edges if needed
    chosen = GraphSpec(sorted(verts), pairs)
    while not _is_connected(chosen):
        missing = [p for p in spec.pairs if p[2] in verts and p[3] in verts and p not in chosen.pairs]
        chosen.pairs.append(rng.choice(missing))
    return chosen


def _is_connected(spec: GraphSpec) -> bool:
    if not spec.vertices:
        return False
    seen = {spec.vertices[0]}
    todo = [spec.vertices[0]]
    while todo:
        v = todo.pop()
        for p in spec.pairs:
            for x, y in ((p[2], p[3]), (p[3], p[2])):
                if x == v and y not in seen:
                    seen.add(y)
                    todo.append(y)
    return seen == set(spec.vertices)


# -- splitting decompositions ------------------------------------------------------

def vertex_split(rng: random.Random, max_pairs: int = 6):
    """(Γ, (Γ1, Γ2), c) with Γ1 ∩ Γ2 = {c}."""
    p1 = rng.randint(1, max_pairs - 1)
    p2 = rng.randint(1, max_pairs - p1)
    s1 = random_spec(rng, p1, "x")
    s2 = random_spec(rng, p2, "y")
    s1 = _rename(s1, {rng.choice(s1.vertices): "c"})
    s2 = _rename(s2, {rng.choice(s2.vertices): "c"})
    g = _glue(s1, s2).build()
    return g, (g.subgraph(s1.vertices, _names(s1)), g.subgraph(s2.vertices, _names(s2))), "c"


def _names(spec: GraphSpec) -> list:
    return [x for p in spec.pairs for x in (p[0], p[1])]


def vertex_overlap(rng: random.Random, max_pairs: int = 6):
    """(Γ, (Λ1, Λ2, Γ1, Γ2), c) with Λ1 ∩ Λ2 = {c} and Λi ⊆ Γi."""
    g, (l1, l2), c = vertex_split(rng, max_pairs)
    s1 = GraphSpec(list(l1.vertices), [p for p in _spec_of(g).pairs if p[0] in l1.edges])
    s2 = GraphSpec(list(l2.vertices), [p for p in _spec_of(g).pairs if p[0] in l2.edges])
    piece1 = _connected_piece(rng, s1, [c])
    piece2 = _connected_piece(rng, s2, [c])
    g1 = _glue(s1, piece2)
    g2 = _glue(piece1, s2)
    return g, (l1, l2, g.subgraph(g1.vertices, _names(g1)), g.subgraph(g2.vertices, _names(g2))), c


def _spec_of(g: WeightedGraph) -> GraphSpec:
    return GraphSpec(list(g.vertices), [(a, g.inverse[a], g.origin[a], g.terminus(a), g.weight[a],
                                         g.weight[g.inverse[a]]) for a in g.edge_pairs()])


def edge_split(rng: random.Random, max_pairs: int = 6):
    """(Γ, (Γ1, Γ2), a) with Γ1 ∩ Γ2 the 1-segment {a, ā}, t(a) terminal in Γ1
    and o(a) terminal in Γ2."""
    g, g1, g2, a = segment_join_instance(rng, max_pairs, tree=False)
    return g, (g1, g2), a


def edge_overlap(rng: random.Random, max_pairs: int = 6):
    g, (l1, l2), a = edge_split(rng, max_pairs)
    full = _spec_of(g)
    s1 = GraphSpec(list(l1.vertices), [p for p in full.pairs if p[0] in l1.edges])
    s2 = GraphSpec(list(l2.vertices), [p for p in full.pairs if p[0] in l2.edges])
    seg = ("a",)
    piece1 = _connected_piece(rng, s1, ["c", "d"], seg)
    piece2 = _connected_piece(rng, s2, ["c", "d"], seg)
    for piece in (piece1, piece2):
        if not any(p[0] == "a" for p in piece.pairs):
            piece.pairs.append(next(p for p in full.pairs if p[0] == "a"))
    g1 = _glue(s1, piece2)
    g2 = _glue(piece1, s2)
    return g, (l1, l2, g.subgraph(g1.vertices, _names(g1)), g.subgraph(g2.vertices, _names(g2))), a


def terminal_segment(rng: random.Random, max_pairs: int = 6):
    """(Γ, (), a) with o(a) a terminal vertex."""
    s = random_spec(rng, rng.randint(1, max_pairs - 1), "x")
    wa, wb = _weights(rng, 2, 5)
    s.vertices.append("c")
    s.pairs.append(("a", "ab", "c", rng.choice(s.vertices[:-1]), wa, wb))
    return s.build(), (), "a"


def loop_reduction(rng: random.Random, max_pairs: int = 6):
    """(Γ, (), a) with a a 1-loop."""
    s = random_spec(rng, rng.randint(1, max_pairs - 1), "x")
    wa, wb = _weights(rng, 2, 5)
    v = rng.choice(s.vertices)
    s.pairs.append(("a", "ab", v, v, wa, wb))
    return s.build(), (), "a"


SPLIT_KINDS = {
    "vertex": vertex_split,
    "vertex_overlap": vertex_overlap,
    "edge": edge_split,
    "edge_overlap": edge_overlap,
    "terminal_segment": terminal_segment,
    "loop": loop_reduction,
}


def segment_join_instance(rng: random.Random, max_pairs: int = 6, tree: bool = True):
    """(Γ, Γ1, Γ2, a): Λ1 at c, Λ2 at d, joined by a: c → d.

    det(I - T) vanishes at x = 1 as soon as a cycle or loop is present, so
    trees are the default.
    """
    p1 = rng.randint(0, max(0, max_pairs - 2))
    p2 = rng.randint(0, max(0, max_pairs - 1 - p1))
    wa, wb = _weights(rng, 2, 5)
    parts = []
    for pre, p, name in (("x", p1, "c"), ("y", p2, "d")):
        s = random_spec(rng, p, pre, tree=tree) if p else GraphSpec([f"{pre}v0"], [])
        parts.append(_rename(s, {rng.choice(s.vertices): name}))
    seg = GraphSpec(["c", "d"], [("a", "ab", "c", "d", wa, wb)])
    g1s = _glue(parts[0], seg)
    g2s = _glue(seg, parts[1])
    g = _glue(parts[0], seg, parts[1]).build()
    return g, g.subgraph(g1s.vertices, _names(g1s)), g.subgraph(g2s.vertices, _names(g2s)), "a"


# -- diagrams -------------------------------------------------------------------------

GOOD_BLOCKS = ("full", "dihedral_odd")
ANY_BLOCKS = ("cyclic", "dihedral", "full")


def _block_gens(kind: str, block) -> list:
    if kind == "cyclic":
        return cyclic_generators(block)
    if kind.startswith("dihedral"):
        return dihedral_generators(block)
    return symmetric_generators(block)


def random_diagram(rng: random.Random, max_pairs: int = 3, lo: int = 2, hi: int = 4,
                   kinds: dict | None = None, random_iota: bool = False) -> LocalActionDiagram:
    g = random_spec(rng, rng.randint(1, max_pairs), lo=lo, hi=hi).build()
    kinds = kinds or {a: rng.choice(ANY_BLOCKS) for a in g.edges}
    d = make_diagram(g, lambda a, block: _block_gens(kinds[a], block))
    if random_iota:
        d.inversion = {x: rng.choice(d.colors[g.inverse[d.edge_of[x]]]) for x in d.order}
    return d


def non_full_diagram(rng: random.Random, max_pairs: int = 2, tries: int = 200, hi: int = 4) -> LocalActionDiagram:
    """Diagram with some cyclic or dihedral local action that passes the
    (P)-closed setting: each edge pair gets one block whose point stabilizers
    have no orbit of size one outside the point."""
    for _ in range(tries):
        pairs = rng.randint(1, max_pairs)
        s = random_spec(rng, pairs, lo=3, hi=hi)
        kinds, pairs_out = {}, []
        for a, b, o, t, wa, wb in s.pairs:
            good, other = (a, b) if rng.random() < 0.5 else (b, a)
            kinds[good] = rng.choice(GOOD_BLOCKS)
            kinds[other] = rng.choice(("cyclic", "dihedral"))
            sizes = {a: wa, b: wb}
            if kinds[good] == "dihedral_odd" and sizes[good] % 2 == 0:
                sizes[good] -= 1
            pairs_out.append((a, b, o, t, sizes[a], sizes[b]))
        g = make_graph(s.vertices, pairs_out)
        d = make_diagram(g, lambda a, block: _block_gens(kinds[a], block))
        if d.inversion is None or not setting_pclosed_ok(d):
            continue
        return d
    raise RuntimeError("no admissible diagram found")


def tree_size(d: LocalActionDiagram, c0: str, L: int) -> int:
    """Number of vertices of the standard Δ-tree truncated at depth L."""
    from collections import Counter

    from .lad import reduced_successors

    iota = d.iota()
    layer = Counter(d.vertex_colors(c0))
    total = 1
    for _ in range(L):
        total += sum(layer.values())
        nxt = Counter()
        for x, cnt in layer.items():
            for y in reduced_successors(d, iota, x):
                nxt[y] += cnt
        layer = nxt
    return total
