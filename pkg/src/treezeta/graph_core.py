"""Serre graphs with an edge weight, paths on them, and spanning structures."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class GraphError(ValueError):
    """Raised when a graph description or a path is invalid."""


@dataclass(frozen=True)
class Path:
    """Edge sequence with an explicit start vertex, so O_v is representable."""

    start: str
    edges: tuple = ()

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        if not self.edges:
            return f"O_{self.start}"
        return "(" + ",".join(self.edges) + ")"


@dataclass(frozen=True)
class Orientation:
    positive: frozenset


class WeightedGraph:
    """A finite connected graph in the sense of Serre, with integer edge weights.

    Vertices and edges are string ids. Edges are kept in lexicographic order,
    which fixes the row/column order of every edge-indexed matrix.
    """

    __slots__ = ("vertices", "edges", "origin", "inverse", "weight", "_index", "_out", "_in")

    def __init__(self, vertices: Iterable[str], origin: Mapping[str, str],
                 inverse: Mapping[str, str], weight: Mapping[str, int]):
        self.vertices = tuple(sorted(vertices))
        self.edges = tuple(sorted(origin))
        self.origin = dict(origin)
        self.inverse = dict(inverse)
        self.weight = dict(weight)
        self._check()
        self._index = {e: i for i, e in enumerate(self.edges)}
        out = {v: [] for v in self.vertices}
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            out[self.origin[e]].append(e)
            inc[self.terminus(e)].append(e)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}

    def _check(self) -> None:
        if not self.vertices:
            raise GraphError("graph has no vertices")
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        clash = vset & set(self.edges)
        if clash:
            raise GraphError(f"id used for both a vertex and an edge: {sorted(clash)[0]}")
        for e in self.edges:
            if self.origin[e] not in vset:
                raise GraphError(f"dangling origin for edge {e}: {self.origin[e]}")
            if e not in self.inverse:
                raise GraphError(f"edge {e} has no inverse")
            f = self.inverse[e]
            if f == e:
                raise GraphError(f"fixed-point inversion at edge {e}")
            if f not in self.origin or self.inverse.get(f) != e:
                raise GraphError(f"non-involutive pairing at edge {e}")
            w = self.weight.get(e)
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise GraphError(f"non-positive weight at edge {e}: {w!r}")
        if not self._connected():
            raise GraphError("disconnected graph")

    def _connected(self) -> bool:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            adj[self.origin[e]].add(self.terminus(e))
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for w in adj[v] - seen:
                seen.add(w)
                todo.append(w)
        return len(seen) == len(self.vertices)

    def terminus(self, e: str) -> str:
        return self.origin[self.inverse[e]]

    def bar(self, e: str) -> str:
        return self.inverse[e]

    def out_edges(self, v: str) -> tuple:
        return self._out[v]

    def in_edges(self, v: str) -> tuple:
        return self._in[v]

    def index(self, e: str) -> int:
        return self._index[e]

    def is_vertex(self, u: str) -> bool:
        return u in self._out

    def is_edge(self, u: str) -> bool:
        return u in self._index

    def is_loop(self, e: str) -> bool:
        return self.origin[e] == self.terminus(e)

    def site(self, u: str) -> str:
        if not (self.is_vertex(u) or self.is_edge(u)):
            raise GraphError(f"unknown vertex or edge: {u}")
        return u

    def edge_pairs(self) -> list:
        """One representative per geometric edge, the lexicographically smaller id."""
        return [e for e in self.edges if e < self.inverse[e]]

    def subgraph(self, vertices: Iterable[str], edges: Iterable[str]) -> "WeightedGraph":
        vs = set(vertices)
        es = set(edges)
        for e in es:
            if e not in self._index:
                raise GraphError(f"unknown edge {e}")
            if self.inverse[e] not in es:
                raise GraphError(f"subgraph contains {e} but not its inverse")
            if self.origin[e] not in vs:
                raise GraphError(f"subgraph edge {e} leaves the vertex set")
        return WeightedGraph(vs, {e: self.origin[e] for e in es},
                             {e: self.inverse[e] for e in es},
                             {e: self.weight[e] for e in es})

    def with_weights(self, weight: Mapping[str, int]) -> "WeightedGraph":
        return WeightedGraph(self.vertices, self.origin, self.inverse, weight)

    def to_raw(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": e, "origin": self.origin[e], "terminus": self.terminus(e),
                       "inverse": self.inverse[e], "weight": self.weight[e]} for e in self.edges],
        }

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightedGraph) and self.vertices == other.vertices
                and self.origin == other.origin and self.inverse == other.inverse
                and self.weight == other.weight)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"WeightedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


def validate_graph(raw: Mapping) -> WeightedGraph:
    """Build a graph from its JSON form, checking every invariant."""
    if not isinstance(raw, Mapping):
        raise GraphError("graph document must be an object")
    try:
        vertices = [str(v) for v in raw["vertices"]]
        items = raw["edges"]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"missing field {exc}") from None
    origin, inverse, weight, term = {}, {}, {}, {}
    for k, item in enumerate(items):
        try:
            name = str(item["name"])
            origin[name] = str(item["origin"])
            term[name] = str(item["terminus"])
            inverse[name] = str(item["inverse"])
            weight[name] = item["weight"]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"edges[{k}]: missing field {exc}") from None
    if len(origin) != len(items):
        raise GraphError("duplicate edge name")
    for e in origin:
        f = inverse[e]
        if f not in origin:
            raise GraphError(f"non-involutive pairing at edge {e}: inverse {f} not listed")
    g = WeightedGraph(vertices, origin, inverse, weight)
    for e, t in term.items():
        if g.terminus(e) != t:
            raise GraphError(f"terminus of {e} is {t} but origin of its inverse is {g.terminus(e)}")
    return g


def load_graph(path: str) -> WeightedGraph:
    with open(path) as fh:
        return validate_graph(json.load(fh))


def make_graph(vertices: Iterable[str], pairs: Iterable[tuple]) -> WeightedGraph:
    """Shorthand: pairs are (a, abar, o(a), t(a), w(a), w(abar))."""
    origin, inverse, weight = {}, {}, {}
    for a, b, o, t, wa, wb in pairs:
        origin[a], origin[b] = o, t
        inverse[a], inverse[b] = b, a
        weight[a], weight[b] = wa, wb
    return WeightedGraph(vertices, origin, inverse, weight)


# -- paths -------------------------------------------------------------------

def check_path(g: WeightedGraph, p: Path) -> None:
    if not g.is_vertex(p.start):
        raise GraphError(f"unknown start vertex {p.start}")
    at = p.start
    for e in p.edges:
        if not g.is_edge(e):
            raise GraphError(f"unknown edge {e}")
        if g.origin[e] != at:
            raise GraphError(f"edge {e} does not start at {at}")
        at = g.terminus(e)


def path_from_edges(g: WeightedGraph, edges: Iterable[str]) -> Path:
    edges = tuple(edges)
    if not edges:
        raise GraphError("cannot infer the start of an empty path")
    p = Path(g.origin[edges[0]], edges)
    check_path(g, p)
    return p


def path_end(g: WeightedGraph, p: Path) -> str:
    return g.terminus(p.edges[-1]) if p.edges else p.start


def path_compose(g: WeightedGraph, p: Path, q: Path) -> Path:
    if path_end(g, p) != q.start:
        raise GraphError(f"cannot compose: {p} ends at {path_end(g, p)}, {q} starts at {q.start}")
    return Path(p.start, p.edges + q.edges)


def path_reverse(g: WeightedGraph, p: Path) -> Path:
    return Path(path_end(g, p), tuple(g.inverse[e] for e in reversed(p.edges)))


def is_reduced(g: WeightedGraph, p: Path) -> bool:
    return all(g.inverse[a] != b for a, b in zip(p.edges, p.edges[1:]))


def enumerate_paths(g: WeightedGraph, start: str, max_len: int) -> Iterator[Path]:
    """All paths (reduced or not) from a vertex, or beginning with a given edge.

    Output is ordered by length, then lexicographically by edge ids.
    """
    if max_len < 0:
        return
    if g.is_vertex(start):
        layer = [Path(start)]
    else:
        g.site(start)
        layer = [Path(g.origin[start], (start,))]
    while layer:
        yield from layer
        if len(layer[0]) >= max_len:
            break
        nxt = []
        for p in layer:
            for e in g.out_edges(path_end(g, p)):
                nxt.append(Path(p.start, p.edges + (e,)))
        layer = nxt


# -- spanning structures -------------------------------------------------------

def spanning_tree(g: WeightedGraph, root: str | None = None) -> tuple:
    """BFS spanning tree; returns (tree edge set closed under inverse, parent-edge map).

    parent[v] is the tree edge pointing from the parent of v to v.
    """
    root = g.vertices[0] if root is None else root
    parent = {root: None}
    queue = deque([root])
    tree = set()
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            w = g.terminus(e)
            if w not in parent:
                parent[w] = e
                tree.update((e, g.inverse[e]))
                queue.append(w)
    return frozenset(tree), parent


def tree_path(g: WeightedGraph, tree: frozenset, c: str, d: str) -> Path:
    """The unique reduced path from c to d using only edges of the given subtree."""
    parent = {c: None}
    queue = deque([c])
    while queue:
        v = queue.popleft()
        if v == d:
            break
        for e in g.out_edges(v):
            if e in tree:
                w = g.terminus(e)
                if w not in parent:
                    parent[w] = e
                    queue.append(w)
    if d not in parent:
        raise GraphError(f"{d} not reachable from {c} in subtree")
    edges = []
    v = d
    while parent[v] is not None:
        e = parent[v]
        edges.append(e)
        v = g.origin[e]
    return Path(c, tuple(reversed(edges)))


def fundamental_cycles(g: WeightedGraph) -> list:
    """One closed path per non-tree edge pair: tree path, edge, tree path back."""
    root = g.vertices[0]
    tree, _ = spanning_tree(g, root)
    cycles = []
    for e in g.edge_pairs():
        if e in tree:
            continue
        to_o = tree_path(g, tree, root, g.origin[e])
        back = tree_path(g, tree, g.terminus(e), root)
        cycles.append(Path(root, to_o.edges + (e,) + back.edges))
    return cycles


def oriented_spanning(g: WeightedGraph, c: str, tree_root: str | None = None) -> tuple:
    """Maximal subtree Λ and an orientation whose origin map on EΛ⁺ hits VΛ minus c once each.

    Tree edges are oriented towards c. Non-tree pairs take their smaller id.
    """
    g.site(c)
    tree, _ = spanning_tree(g, tree_root)
    positive = set()
    for e in g.edge_pairs():
        if e in tree:
            continue
        positive.add(e)
    # orient tree edges towards c: the positive edge of each pair leaves the child
    _, parent = _rooted(g, tree, c)
    for v, e in parent.items():
        if e is not None:
            positive.add(g.inverse[e])
    lam = g.subgraph(g.vertices, tree)
    return lam, Orientation(frozenset(positive))


def _rooted(g: WeightedGraph, tree: frozenset, c: str) -> tuple:
    parent = {c: None}
    queue = deque([c])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            if e in tree and g.terminus(e) not in parent:
                parent[g.terminus(e)] = e
                queue.append(g.terminus(e))
    return tree, parent


def has_long_cycle(g: WeightedGraph) -> bool:
    """True iff Γ has an n-cycle with n ≥ 2, i.e. Γ minus its loops is not a tree."""
    non_loop_pairs = sum(1 for e in g.edge_pairs() if not g.is_loop(e))
    return non_loop_pairs != len(g.vertices) - 1


def loopless_subtree(g: WeightedGraph) -> WeightedGraph:
    if has_long_cycle(g):
        raise GraphError("graph has a cycle of length >= 2; no unique maximal subtree")
    return g.subgraph(g.vertices, [e for e in g.edges if not g.is_loop(e)])


def union(g: WeightedGraph, *parts: WeightedGraph) -> WeightedGraph:
    vs, es = set(), set()
    for h in parts:
        vs.update(h.vertices)
        es.update(h.edges)
    return g.subgraph(vs, es)


def intersection(g: WeightedGraph, h1: WeightedGraph, h2: WeightedGraph) -> WeightedGraph:
    return g.subgraph(set(h1.vertices) & set(h2.vertices), set(h1.edges) & set(h2.edges))


def same_subgraph(h1: WeightedGraph, h2: WeightedGraph) -> bool:
    return set(h1.vertices) == set(h2.vertices) and set(h1.edges) == set(h2.edges)


def cut_splits(g: WeightedGraph, c: str, limit: int = 16) -> list:
    """Pairs (Γ1, Γ2) with Γ1 ∪ Γ2 = Γ and Γ1 ∩ Γ2 = {c}, both with edges.

    Edges leaving c are grouped when their far ends stay connected after
    deleting c; any bipartition of the groups gives a split.
    """
    star = g.out_edges(c)
    if len(star) < 2:
        return []
    # components of Γ with c removed
    comp = {}
    for v in g.vertices:
        if v == c or v in comp:
            continue
        comp[v] = v
        todo = [v]
        while todo:
            x = todo.pop()
            for e in g.out_edges(x):
                y = g.terminus(e)
                if y != c and y not in comp:
                    comp[y] = v
                    todo.append(y)
    groups = {}
    for e in star:
        key = ("loop", min(e, g.inverse[e])) if g.is_loop(e) else ("comp", comp[g.terminus(e)])
        groups.setdefault(key, []).append(e)
    keys = sorted(groups)
    if len(keys) < 2:
        return []
    splits = []
    n = len(keys)
    for mask in range(1, 2 ** (n - 1)):
        side = [keys[i] for i in range(n) if mask >> i & 1]
        parts = []
        for chosen in (set(side), set(keys) - set(side)):
            vs, es = {c}, set()
            for key in chosen:
                for e in groups[key]:
                    es.update((e, g.inverse[e]))
                if key[0] == "comp":
                    region = {v for v, r in comp.items() if r == key[1]}
                    vs.update(region)
                    es.update(e for e in g.edges if g.origin[e] in region and g.terminus(e) in region)
            parts.append(g.subgraph(vs, es))
        splits.append(tuple(parts))
        if len(splits) >= limit:
            break
    return splits
