"""Hereditary families of poset intervals as weighted class data.

Level ``n`` classes are isomorphism classes of pairs ``(I, x_0 <= ... <= x_n)``
with ``x_0`` the bottom and ``x_n`` the top of the interval ``I``; the
automorphism order is that of ``I`` fixing every ``x_i``.  Classification is
exhaustive: a Weisfeiler-Lehman hash buckets candidates and a VF2 search
decides isomorphism.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from ..simplicial import MonoidalStructure, WeightedClassData

log = logging.getLogger(__name__)


class Poset:
    """Finite poset on ``0..n-1``; ``up[i]`` is the bitmask of elements ``>= i``."""

    __slots__ = ("n", "up", "__dict__")

    def __init__(self, n: int, up: Iterable[int]):
        self.n = n
        self.up = tuple(up)

    @classmethod
    def from_relation(cls, elements: list, leq: Callable) -> "Poset":
        idx = range(len(elements))
        return cls(len(elements),
                   [sum(1 << j for j in idx if leq(elements[i], elements[j])) for i in idx])

    @classmethod
    def chain(cls, k: int) -> "Poset":
        return cls(k, [sum(1 << j for j in range(i, k)) for i in range(k)])

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def bottom(self) -> int | None:
        full = (1 << self.n) - 1
        return next((i for i in range(self.n) if self.up[i] == full), None)

    @cached_property
    def top(self) -> int | None:
        return next((j for j in range(self.n)
                     if all(self.leq(i, j) for i in range(self.n))), None)

    def is_bounded(self) -> bool:
        return self.n > 0 and self.bottom is not None and self.top is not None

    def interval(self, x: int, y: int) -> "Poset":
        members = [z for z in range(self.n) if self.leq(x, z) and self.leq(z, y)]
        pos = {z: k for k, z in enumerate(members)}
        up = [sum(1 << pos[w] for w in members if self.leq(z, w)) for z in members]
        return _Sub(Poset(len(members), up), pos)

    def product(self, other: "Poset") -> "Poset":
        m = other.n
        up = []
        for a in range(self.n):
            for b in range(m):
                mask = 0
                for c in range(self.n):
                    if self.leq(a, c):
                        for d in range(m):
                            if other.leq(b, d):
                                mask |= 1 << (c * m + d)
                up.append(mask)
        return Poset(self.n * m, up)

    @cached_property
    def covers(self) -> list:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.leq(i, j) and not any(
                        k not in (i, j) and self.leq(i, k) and self.leq(k, j)
                        for k in range(self.n)):
                    out.append((i, j))
        return out

    @cached_property
    def height(self) -> int:
        """Length of the longest strict chain."""
        order = sorted(range(self.n), key=lambda i: -bin(self.up[i]).count("1"))
        best = {i: 0 for i in range(self.n)}
        for i in order:
            for j in range(self.n):
                if j != i and self.leq(j, i):
                    best[i] = max(best[i], best[j] + 1)
        return max(best.values(), default=0)

    def multichains(self, n: int) -> list:
        """Sequences ``bottom = x_0 <= ... <= x_n = top``."""
        if n == 0:
            return [(self.bottom,)] if self.bottom == self.top else []
        out = [(self.bottom,)]
        for _ in range(n - 1):
            out = [c + (z,) for c in out for z in range(self.n) if self.leq(c[-1], z)]
        return [c + (self.top,) for c in out]


class _Sub(Poset):
    def __init__(self, poset: Poset, pos: dict):
        super().__init__(poset.n, poset.up)
        self.pos = pos


def _marked_graph(P: Poset, chain: tuple) -> nx.DiGraph:
    G = nx.DiGraph()
    marks = {}
    for k, x in enumerate(chain):
        marks.setdefault(x, []).append(str(k))
    for i in range(P.n):
        G.add_node(i, mark=",".join(marks.get(i, ())))
    G.add_edges_from(P.covers)
    _recolour(G)
    return G


def _recolour(G):
    # refined colours are isomorphism invariant, so matching on them only prunes
    colours = nx.weisfeiler_lehman_subgraph_hashes(G, node_attr="mark", iterations=3)
    for v, hs in colours.items():
        G.nodes[v]["colour"] = hs[-1] if hs else G.nodes[v]["mark"]


def _individualised(G, v, tag):
    H = G.copy()
    H.nodes[v]["mark"] = H.nodes[v]["mark"] + "|" + tag
    _recolour(H)
    return H


def automorphism_order(G, depth=0) -> int:
    """``|Aut(G)|`` preserving marks, by orbit-stabiliser on individualised vertices."""
    classes: dict = {}
    for v, data in G.nodes(data=True):
        classes.setdefault(data["colour"], []).append(v)
    cell = max(classes.values(), key=len, default=[])
    if len(cell) <= 1:
        return 1
    tag = f"*{depth}"
    v = min(cell)
    Gv = _individualised(G, v, tag)
    orbit = 1 + sum(
        DiGraphMatcher(Gv, _individualised(G, w, tag), node_match=_node_match).is_isomorphic()
        for w in cell if w != v)
    return orbit * automorphism_order(Gv, depth + 1)


def _node_match(a, b):
    return a["mark"] == b["mark"] and a["colour"] == b["colour"]


@dataclass
class _Class:
    id: str
    level: int
    poset: Poset
    chain: tuple
    graph: nx.DiGraph
    interval: str
    aut: int = 0


@dataclass
class IntervalFamilySpec:
    """Generator posets (each bounded) and a bound on interval height."""

    generators: list
    degree_bound: int
    names: Callable | None = None

    def __post_init__(self):
        for P in self.generators:
            if not P.is_bounded():
                raise ValueError("every generator must have a least and a greatest element")


class _Registry:
    def __init__(self):
        self.buckets: dict = {}
        self.classes: list = []
        self.exact: dict = {}

    def find(self, level: int, P: Poset, chain: tuple):
        hit = self.exact.get((level, P.up, chain))
        if hit is not None:
            return hit, hit.graph, None
        c, G, key = self._find(level, P, chain)
        if c is not None:
            self.exact[level, P.up, chain] = c
        return c, G, key

    def _find(self, level, P, chain):
        G = _marked_graph(P, chain)
        key = (level, P.n, len(P.covers), nx.weisfeiler_lehman_graph_hash(
            G, node_attr="mark", iterations=3))
        for c in self.buckets.get(key, ()):
            if DiGraphMatcher(c.graph, G, node_match=_node_match).is_isomorphic():
                return c, G, key
        return None, G, key

    def add(self, key, cls: _Class):
        self.buckets.setdefault(key, []).append(cls)
        self.classes.append(cls)


@dataclass
class IntervalFamilyData:
    X: WeightedClassData
    M: MonoidalStructure
    dropped_products: list = field(default_factory=list)
    representatives: dict = field(default_factory=dict)


def interval_family_space(F: IntervalFamilySpec, top_level: int = 2) -> IntervalFamilyData:
    """Weighted class data of the hereditary family generated by ``F``.

    Levels ``0..top_level`` are built; products are cartesian products of
    intervals with paired chains, defined while the height stays within the
    degree bound (the dropped pairs are reported).
    """
    reg = _Registry()
    bound = F.degree_bound
    intervals: list = []  # level-1 classes in discovery order
    dropped: list = []

    def classify_interval(P: Poset):
        chain = (P.bottom, P.top)
        c, G, key = reg.find(1, P, chain)
        if c is None:
            c = _Class("", 1, P, chain, G, "")
            reg.add(key, c)
            intervals.append(c)
            return c, True
        return c, False

    todo = []
    for P in F.generators:
        if P.height > bound:
            raise ValueError(f"generator of height {P.height} exceeds the degree bound {bound}")
        c, new = classify_interval(P)
        if new:
            todo.append(c)
    changed = True
    while changed:
        while todo:
            c = todo.pop()
            P = c.poset
            for x in range(P.n):
                for y in range(P.n):
                    if P.leq(x, y):
                        sub, new = classify_interval(P.interval(x, y))
                        if new:
                            todo.append(sub)
        changed = False
        for a in list(intervals):
            for b in list(intervals):
                if a.poset.height + b.poset.height > bound:
                    continue
                c, new = classify_interval(a.poset.product(b.poset))
                if new:
                    todo.append(c)
                    changed = True
    # deterministic order and names
    intervals.sort(key=lambda c: (c.poset.height, c.poset.n,
                                  nx.weisfeiler_lehman_graph_hash(c.graph, node_attr="mark")))
    namer = F.names or (lambda P, k: f"I{k}")
    for k, c in enumerate(intervals):
        c.id = c.interval = namer(c.poset, k)
        c.aut = automorphism_order(c.graph)
    for a in intervals:
        for b in intervals:
            if a.poset.height + b.poset.height > bound:
                dropped.append((a.id, b.id))

    # higher levels
    by_level: dict = {1: list(intervals)}
    point = next(c for c in intervals if c.poset.n == 1)

    def heights(P, chain):
        return tuple(P.interval(P.bottom, x).height for x in chain)

    def new_class(level, P, chain, G, key, interval):
        base = f"{interval}({','.join(map(str, heights(P, chain)))})"
        taken = {c.id for c in by_level.setdefault(level, [])}
        cid, k = base, 1
        while cid in taken:
            k += 1
            cid = f"{base}#{k}"
        c = _Class(cid, level, P, chain, G, interval)
        reg.add(key, c)
        by_level[level].append(c)
        return c

    for n in [0] + list(range(2, top_level + 1)):
        sources = [point] if n == 0 else intervals
        for I in sources:
            counts: dict = {}
            for chain in I.poset.multichains(n):
                c, G, key = reg.find(n, I.poset, chain)
                if c is None:
                    c = new_class(n, I.poset, chain, G, key, I.id)
                counts[c.id] = counts.get(c.id, 0) + 1
            for c in by_level[n]:
                if c.interval == I.id and c.id in counts:
                    c.aut = I.aut // counts[c.id]
                    assert c.aut * counts[c.id] == I.aut

    def lookup(level, P, chain):
        c, _, _ = reg.find(level, P, chain)
        if c is None:
            raise RuntimeError("family is not closed under subintervals")
        return c.id

    levels = [[c.id for c in by_level[n]] for n in range(top_level + 1)]
    face, degeneracy = {}, {}
    for n in range(1, top_level + 1):
        for i in range(n + 1):
            m = {}
            for c in by_level[n]:
                P, ch = c.poset, c.chain
                if i == 0:
                    sub = P.interval(ch[1], P.top)
                    new = tuple(sub.pos[x] for x in ch[1:])
                elif i == n:
                    sub = P.interval(P.bottom, ch[-2])
                    new = tuple(sub.pos[x] for x in ch[:-1])
                else:
                    sub, new = P, ch[:i] + ch[i + 1:]
                m[c.id] = lookup(n - 1, sub, new)
            face[n, i] = m
    for n in range(top_level):
        for i in range(n + 1):
            degeneracy[n, i] = {c.id: lookup(n + 1, c.poset, c.chain[:i + 1] + c.chain[i:])
                                for c in by_level[n]}
    aut = [{c.id: c.aut for c in by_level[n]} for n in range(top_level + 1)]
    X = WeightedClassData(levels, face, degeneracy, aut)

    product = []
    for n in range(top_level + 1):
        table = {}
        for a in by_level[n]:
            for b in by_level[n]:
                if a.poset.height + b.poset.height > bound:
                    continue
                m = b.poset.n
                P = a.poset.product(b.poset)
                chain = tuple(x * m + y for x, y in zip(a.chain, b.chain))
                table[a.id, b.id] = lookup(n, P, chain)
        product.append(table)
    M = MonoidalStructure(by_level[0][0].id, product)
    reps = {c.id: (c.poset, c.chain) for n in by_level for c in by_level[n]}
    if dropped:
        log.info("interval family: %d products exceed the degree bound", len(dropped))
    return IntervalFamilyData(X, M, dropped, reps)


def boolean_intervals(bound: int, top_level: int = 2) -> IntervalFamilyData:
    """Family generated by the two-element chain: the Boolean lattices ``B_0..B_bound``."""
    spec = IntervalFamilySpec([Poset.chain(2)], bound, names=lambda P, k: f"B_{P.height}")
    return interval_family_space(spec, top_level)
