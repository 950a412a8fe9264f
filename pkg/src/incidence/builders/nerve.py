"""Nerves of finite categories and posets, the monotone-surjection space, and
the free monoidal closure of a simplicial set."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Iterable, Mapping

from ..errors import MalformedInput
from ..simplicial import MonoidalStructure, TruncatedSimplicialSet


@dataclass(frozen=True)
class FiniteCategorySpec:
    """Objects, named arrows with source/target, identities and composition.

    ``composition[g, f]`` is ``g ∘ f`` (first ``f``, then ``g``).
    """

    objects: tuple
    arrows: Mapping[str, tuple]
    identities: Mapping[str, str]
    composition: Mapping[tuple, str]

    def __post_init__(self):
        objs = set(self.objects)
        for a, (src, tgt) in self.arrows.items():
            if src not in objs or tgt not in objs:
                raise MalformedInput(f"arrow {a!r} has unknown endpoints")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.arrows.get(i) != (x, x):
                raise MalformedInput(f"object {x!r} lacks an identity")
        for f, (fs, ft) in self.arrows.items():
            for g, (gs, gt) in self.arrows.items():
                if gs != ft:
                    continue
                h = self.composition.get((g, f))
                if h is None or self.arrows.get(h) != (fs, gt):
                    raise MalformedInput(f"composite of {g!r} after {f!r} missing or ill-typed")
            if self.composition[f, self.identities[fs]] != f or \
                    self.composition[self.identities[ft], f] != f:
                raise MalformedInput(f"unit law fails for {f!r}")
        for f, (_, ft) in self.arrows.items():
            for g, (gs, gt) in self.arrows.items():
                if gs != ft:
                    continue
                gf = self.composition[g, f]
                for h, (hs, _) in self.arrows.items():
                    if hs != gt:
                        continue
                    if self.composition[h, gf] != self.composition[self.composition[h, g], f]:
                        raise MalformedInput(f"associativity fails for {h!r},{g!r},{f!r}")

    def source(self, a):
        return self.arrows[a][0]

    def target(self, a):
        return self.arrows[a][1]

    def compose(self, g, f):
        return self.composition[g, f]

    def is_identity(self, a) -> bool:
        src, tgt = self.arrows[a]
        return src == tgt and self.identities[src] == a


def poset_category(elements: Iterable, leq: Callable) -> FiniteCategorySpec:
    """The order on ``elements`` as a category with arrows named ``"x<=y"``."""
    raw = {str(e): e for e in elements}
    elements = tuple(raw)
    arrows = {}
    for x in elements:
        for y in elements:
            if leq(raw[x], raw[y]):
                arrows[f"{x}<={y}"] = (x, y)
    composition = {}
    for f, (x, y) in arrows.items():
        for g, (y2, z) in arrows.items():
            if y2 == y:
                composition[g, f] = f"{x}<={z}"
    identities = {x: f"{x}<={x}" for x in elements}
    return FiniteCategorySpec(elements, arrows, identities, composition)


def _strings(C: FiniteCategorySpec, n: int) -> list:
    if n == 0:
        return [(x,) for x in C.objects]
    out = [(a,) for a in C.arrows]
    by_source: dict = {}
    for a in C.arrows:
        by_source.setdefault(C.source(a), []).append(a)
    for _ in range(n - 1):
        out = [s + (a,) for s in out for a in by_source.get(C.target(s[-1]), ())]
    return out


def nerve_of_category(C: FiniteCategorySpec, N: int,
                      label: Callable | None = None) -> TruncatedSimplicialSet:
    """Levels ``0..N`` of the nerve: composable strings of arrows.

    ``label(string)`` prints an ``n``-string (``n >= 1``); the default joins
    arrow names with ``;``.  Level 0 ids are the object names.
    """
    if label is None:
        label = ";".join
    strings = [_strings(C, n) for n in range(N + 1)]
    name = [{} for _ in range(N + 1)]
    for n in range(N + 1):
        for s in strings[n]:
            name[n][s] = s[0] if n == 0 else label(s)

    def vertex(s, i):
        return C.source(s[i]) if i < len(s) else C.target(s[-1])

    def face(s, i):
        n = len(s)
        if n == 1:
            return (C.target(s[0]),) if i == 0 else (C.source(s[0]),)
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[: i - 1] + (C.compose(s[i], s[i - 1]),) + s[i + 1:]

    def degeneracy(s, n, i):
        if n == 0:
            return (C.identities[s[0]],)
        return s[:i] + (C.identities[vertex(s, i)],) + s[i:]

    faces = {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            faces[n, i] = {name[n][s]: name[n - 1][face(s, i)] for s in strings[n]}
    degs = {}
    for n in range(N):
        for i in range(n + 1):
            degs[n, i] = {name[n][s]: name[n + 1][degeneracy(s, n, i)] for s in strings[n]}
    levels = [[name[n][s] for s in strings[n]] for n in range(N + 1)]
    return TruncatedSimplicialSet(levels, faces, degs)


def poset_nerve(elements: Iterable, leq: Callable, N: int) -> TruncatedSimplicialSet:
    """Nerve of a poset with simplices printed as chains ``x0<=x1<=...``."""
    C = poset_category(elements, leq)

    def label(s):
        return "<=".join([C.source(s[0])] + [C.target(a) for a in s])

    return nerve_of_category(C, N, label)


def chain_poset(k: int):
    """The chain ``0 < 1 < ... < k-1``."""
    return list(range(k)), (lambda a, b: a <= b)


def divisor_poset(n: int):
    return [d for d in range(1, n + 1) if n % d == 0], (lambda a, b: b % a == 0)


def boolean_poset(rank: int):
    """Subsets of ``{1..rank}`` printed as ``{1,3}``."""
    elements = []
    for mask in range(1 << rank):
        elements.append(frozenset(i + 1 for i in range(rank) if mask >> i & 1))
    elements.sort(key=lambda s: (len(s), sorted(s)))

    class _Set(frozenset):
        def __str__(self):
            return "{" + ",".join(map(str, sorted(self))) + "}"

    return [_Set(e) for e in elements], (lambda a, b: a <= b)


# ---------------------------------------------------------------------------
# monotone surjections

def composition_label(c: Iterable[int]) -> str:
    return "(" + ",".join(map(str, c)) + ")"


def _compositions(m: int):
    """All compositions of ``m`` (ordered tuples of positive parts)."""
    if m == 0:
        return [()]
    out = []
    for cuts in cartesian((0, 1), repeat=m - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    out.sort(key=lambda c: (len(c), [-p for p in c]))
    return out


def monotone_surjection_category(max_source: int) -> FiniteCategorySpec:
    """Finite ordinals ``0..max_source`` and monotone surjections.

    The surjection ``m -> n`` is encoded by the composition of ``m`` listing
    its fibre sizes.
    """
    objects = tuple(str(m) for m in range(max_source + 1))
    arrows, comps = {}, {}
    for m in range(max_source + 1):
        for c in _compositions(m):
            name = composition_label(c)
            arrows[name] = (str(m), str(len(c)))
            comps[name] = c
    composition = {}
    for f, (_, fn) in arrows.items():
        for g, (gm, _) in arrows.items():
            if gm != fn:
                continue
            c, d = comps[f], comps[g]
            out, pos = [], 0
            for block in d:
                out.append(sum(c[pos: pos + block]))
                pos += block
            composition[g, f] = composition_label(out)
    identities = {str(m): composition_label([1] * m) for m in range(max_source + 1)}
    return FiniteCategorySpec(objects, arrows, identities, composition)


def monotone_surjection_space(max_source: int, N: int = 3) -> tuple:
    """Nerve of monotone surjections between ordinals ``<= max_source`` with
    ordinal sum as (partial) monoidal product."""
    if max_source < 1:
        raise ValueError("max_source must be >= 1")
    C = monotone_surjection_category(max_source)
    X = nerve_of_category(C, N, label="|".join)
    source = {}
    parts: list = []
    for n in range(N + 1):
        sizes = {}
        split = {}
        for x in X.levels[n]:
            if n == 0:
                sizes[x] = int(x)
                split[x] = x
            else:
                edges = x.split("|")
                sizes[x] = sum(int(p) for p in edges[0][1:-1].split(",") if p)
                split[x] = tuple(edges)
        source[n] = sizes
        parts.append(split)
    product = []
    for n in range(N + 1):
        table = {}
        lookup = set(X.levels[n])
        for a in X.levels[n]:
            for b in X.levels[n]:
                if source[n][a] + source[n][b] > max_source:
                    continue
                if n == 0:
                    c = str(int(a) + int(b))
                else:
                    c = "|".join(_concat(p, q) for p, q in zip(parts[n][a], parts[n][b]))
                assert c in lookup
                table[a, b] = c
        product.append(table)
    return X, MonoidalStructure("0", product, ambient="composition-concatenation")


def _concat(p: str, q: str) -> str:
    inner = [s for s in (p[1:-1], q[1:-1]) if s]
    return "(" + ",".join(inner) + ")"


# ---------------------------------------------------------------------------
# free monoidal closure

def _word(letters) -> str:
    return "".join(f"[{x}]" for x in letters) or "[]"


def free_monoidal_closure(X: TruncatedSimplicialSet, max_word: int = 1) -> tuple:
    """Levelwise free monoid on ``X``, words of length ``<= max_word``.

    Words are printed ``[x][y]``; the empty word ``[]`` is the unit.
    Concatenation splits uniquely by length, so the structure is CULF.
    """
    words = []
    for n in range(X.N + 1):
        level = []
        for k in range(max_word + 1):
            level.extend(cartesian(X.levels[n], repeat=k))
        words.append(level)
    levels = [[_word(w) for w in level] for level in words]
    faces = {(n, i): {_word(w): _word(X.d(n, i, x) for x in w) for w in words[n]}
             for n in range(1, X.N + 1) for i in range(n + 1)}
    degs = {(n, i): {_word(w): _word(X.s(n, i, x) for x in w) for w in words[n]}
            for n in range(X.N) for i in range(n + 1)}
    Y = TruncatedSimplicialSet(levels, faces, degs)
    product = []
    for n in range(X.N + 1):
        table = {}
        for u in words[n]:
            for v in words[n]:
                if len(u) + len(v) <= max_word:
                    table[_word(u), _word(v)] = _word(u + v)
        product.append(table)
    return Y, MonoidalStructure("[]", product, ambient="word-concatenation")
