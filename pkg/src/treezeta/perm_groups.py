"""Finite permutation groups on colour ids, given by generators."""

from __future__ import annotations

import threading
from collections import deque
from typing import Iterable, Mapping, Sequence

DEFAULT_CAP = 10 ** 6


class GroupError(ValueError):
    pass


class Permutation:
    """Bijection of a fixed ordered domain, stored as an image tuple on indices."""

    __slots__ = ("domain", "images")

    def __init__(self, domain: Sequence[str], images: Sequence[int]):
        self.domain = tuple(domain)
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.domain))):
            raise GroupError("not a bijection")

    @classmethod
    def from_mapping(cls, domain: Sequence[str], mapping: Mapping[str, str]) -> "Permutation":
        """Points missing from the mapping are fixed."""
        pos = {x: i for i, x in enumerate(domain)}
        images = list(range(len(domain)))
        for x, y in mapping.items():
            if x not in pos or y not in pos:
                raise GroupError(f"generator moves a point outside the domain: {x}->{y}")
            images[pos[x]] = pos[y]
        if len(set(images)) != len(images):
            raise GroupError("generator is not a bijection")
        return cls(domain, images)

    @classmethod
    def from_cycles(cls, domain: Sequence[str], cycles: Iterable[Sequence[str]]) -> "Permutation":
        mapping = {}
        for cyc in cycles:
            for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                mapping[x] = y
        return cls.from_mapping(domain, mapping)

    def __call__(self, x: str) -> str:
        return self.domain[self.images[self.domain.index(x)]]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """(self * other)(x) = self(other(x))."""
        return Permutation(self.domain, tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(self.domain, inv)

    def as_mapping(self) -> dict:
        return {self.domain[i]: self.domain[j] for i, j in enumerate(self.images) if i != j}

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.as_mapping()})"


def _compose(p: tuple, q: tuple) -> tuple:
    return tuple(p[j] for j in q)


class PermGroup:
    """Group generated by permutations of a common domain.

    Orbit and stabilizer-orbit queries work from the generators (Schreier
    generators for point stabilizers). The full element list is built only
    on demand, once, under a lock.
    """

    def __init__(self, domain: Sequence[str], gens: Iterable = (), cap: int = DEFAULT_CAP):
        self.domain = tuple(domain)
        self._pos = {x: i for i, x in enumerate(self.domain)}
        if len(self._pos) != len(self.domain):
            raise GroupError("duplicate point in domain")
        self.cap = cap
        imgs = []
        for g in gens:
            if isinstance(g, Permutation):
                if g.domain != self.domain:
                    raise GroupError("generator on a different domain")
                imgs.append(g.images)
            elif isinstance(g, Mapping):
                imgs.append(Permutation.from_mapping(self.domain, g).images)
            else:
                imgs.append(Permutation(self.domain, g).images)
        ident = tuple(range(len(self.domain)))
        self._gens = tuple(dict.fromkeys(i for i in imgs if i != ident))
        self._elements = None
        self._lock = threading.Lock()
        self._stab_cache = {}

    @property
    def generators(self) -> list:
        return [Permutation(self.domain, g) for g in self._gens]

    def index(self, x: str) -> int:
        try:
            return self._pos[x]
        except KeyError:
            raise GroupError(f"unknown point {x}") from None

    # -- orbits ---------------------------------------------------------------

    def _orbit_idx(self, i: int, gens) -> list:
        seen = {i}
        order = [i]
        for j in order:
            for g in gens:
                k = g[j]
                if k not in seen:
                    seen.add(k)
                    order.append(k)
        return order

    def orbit(self, x: str) -> frozenset:
        return frozenset(self.domain[j] for j in self._orbit_idx(self.index(x), self._gens))

    def orbits(self) -> list:
        """Partition of the domain into orbits, in domain order."""
        return _partition(len(self.domain), self._gens, self.domain)

    # -- stabilizers ------------------------------------------------------------

    def stabilizer_generators(self, x: str) -> list:
        """Schreier generators of the point stabilizer of x."""
        i = self.index(x)
        if i in self._stab_cache:
            return self._stab_cache[i]
        n = len(self.domain)
        ident = tuple(range(n))
        trans = {i: ident}
        queue = deque([i])
        while queue:
            j = queue.popleft()
            for g in self._gens:
                k = g[j]
                if k not in trans:
                    trans[k] = _compose(g, trans[j])
                    queue.append(k)
        inv = {}
        for k, t in trans.items():
            ti = [0] * n
            for a, b in enumerate(t):
                ti[b] = a
            inv[k] = tuple(ti)
        out = set()
        for j, t in trans.items():
            for g in self._gens:
                h = _compose(inv[g[j]], _compose(g, t))
                if h != ident:
                    out.add(h)
        gens = sorted(out)
        self._stab_cache[i] = gens
        return gens

    def stabilizer_orbits(self, x: str) -> list:
        return _partition(len(self.domain), self.stabilizer_generators(x), self.domain)

    def stab_orbit_size(self, x: str, y: str) -> int:
        """|Stab(x) · y|."""
        j = self.index(y)
        return len(self._orbit_idx(j, self.stabilizer_generators(x)))

    def stab_orbit_size_brute(self, x: str, y: str) -> int:
        """Same quantity, by filtering the materialized element list."""
        i, j = self.index(x), self.index(y)
        return len({g[j] for g in self._materialize() if g[i] == i})

    # -- materialization ----------------------------------------------------------

    def _materialize(self) -> list:
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    self._elements = self._closure()
        return self._elements

    def _closure(self) -> list:
        ident = tuple(range(len(self.domain)))
        seen = {ident}
        order = [ident]
        for h in order:
            for g in self._gens:
                k = _compose(g, h)
                if k not in seen:
                    seen.add(k)
                    order.append(k)
                    if len(order) > self.cap:
                        raise GroupError(f"group order exceeds cap {self.cap}; diagram too large for brute force")
        return order

    def elements(self) -> list:
        return [Permutation(self.domain, g) for g in self._materialize()]

    def order(self) -> int:
        return len(self._materialize())

    def stabilizer_order(self, x: str) -> int:
        i = self.index(x)
        return sum(1 for g in self._materialize() if g[i] == i)

    def contains(self, p: Permutation) -> bool:
        return p.images in set(self._materialize())

    def __repr__(self) -> str:
        return f"PermGroup(|domain|={len(self.domain)}, gens={len(self._gens)})"


def _partition(n: int, gens, domain) -> list:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for a in range(n):
            ra, rb = find(a), find(g[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    blocks = {}
    for a in range(n):
        blocks.setdefault(find(a), []).append(domain[a])
    return [frozenset(b) for _, b in sorted(blocks.items())]


def closure(domain: Sequence[str], gens: Iterable, cap: int = DEFAULT_CAP) -> PermGroup:
    g = PermGroup(domain, gens, cap)
    g.order()
    return g


# -- standard generating sets ------------------------------------------------------

def symmetric_generators(block: Sequence[str]) -> list:
    """A transposition and a full cycle generate Sym(block)."""
    block = list(block)
    if len(block) < 2:
        return []
    gens = [{block[0]: block[1], block[1]: block[0]}]
    if len(block) > 2:
        gens.append({x: y for x, y in zip(block, block[1:] + block[:1])})
    return gens


def cyclic_generators(block: Sequence[str]) -> list:
    block = list(block)
    if len(block) < 2:
        return []
    return [{x: y for x, y in zip(block, block[1:] + block[:1])}]


def dihedral_generators(block: Sequence[str]) -> list:
    block = list(block)
    if len(block) < 3:
        return cyclic_generators(block)
    n = len(block)
    return cyclic_generators(block) + [{block[i]: block[(-i) % n] for i in range(n)}]


def block_symmetric_group(domain: Sequence[str], blocks: Iterable[Sequence[str]], cap: int = DEFAULT_CAP) -> PermGroup:
    gens = []
    for b in blocks:
        gens.extend(symmetric_generators(b))
    return PermGroup(domain, gens, cap)


def projective_line(p: int) -> list:
    return [str(i) for i in range(p)] + ["inf"]


def psl2_generators(p: int, labels: Sequence[str] | None = None) -> list:
    """z ↦ z+1 and z ↦ -1/z on P¹(F_p), as mappings on the given labels."""
    pts = projective_line(p)
    lab = dict(zip(pts, labels if labels is not None else pts))

    def shift(z):
        return "inf" if z == "inf" else str((int(z) + 1) % p)

    def invneg(z):
        if z == "inf":
            return "0"
        if z == "0":
            return "inf"
        return str((-pow(int(z), -1, p)) % p)

    return [{lab[z]: lab[shift(z)] for z in pts}, {lab[z]: lab[invneg(z)] for z in pts}]
