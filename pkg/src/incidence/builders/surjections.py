"""Weighted class data for strings of finite surjections (the Faà di Bruno case).

An ``n``-string ``A_0 ->> A_1 ->> ... ->> A_n`` up to isomorphism is a forest
of depth ``n``: roots are the points of ``A_n``, leaves the points of ``A_0``.
Classes are encoded canonically:

* a tree of depth 1 is its number of leaves;
* a tree of depth ``d > 1`` is the descending tuple of its subtrees;
* a forest is the descending tuple of its trees (level 0: just a count).

Printed labels are the JSON form of that encoding: ``"3"`` at level 0,
``"[2,1]"`` (fibre sizes) at level 1, ``"[[2,1],[1]]"`` at level 2.
"""
from __future__ import annotations

import json
import os
from math import factorial

from ..errors import BudgetExceeded
from ..simplicial import MonoidalStructure, WeightedClassData

BUDGET_ENV = "INCIDENCE_ENUM_BUDGET"
DEFAULT_BUDGET = 200_000


def enumeration_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


# encoded <-> explicit (explicit trees are tuples of children, a leaf is ())

def decode(e, n: int) -> list:
    if n == 0:
        return [()] * e
    return [_dec_tree(t, n) for t in e]


def _dec_tree(t, d):
    if d == 1:
        return ((),) * t
    return tuple(_dec_tree(c, d - 1) for c in t)


def encode(forest, n: int):
    if n == 0:
        return len(forest)
    return tuple(sorted((_enc_tree(t, n) for t in forest), reverse=True))


def _enc_tree(t, d):
    if d == 1:
        return len(t)
    return tuple(sorted((_enc_tree(c, d - 1) for c in t), reverse=True))


def label(e, n: int) -> str:
    if n == 0:
        return str(e)
    return json.dumps(e, separators=(",", ":"))


def parse(s: str, n: int):
    e = json.loads(s)
    if n == 0:
        return e
    return _tuples(e)


def _tuples(x):
    return tuple(_tuples(y) for y in x) if isinstance(x, list) else x


def leaves(e, n: int) -> int:
    if n == 0:
        return e
    return sum(_tree_leaves(t, n) for t in e)


def _tree_leaves(t, d):
    return t if d == 1 else sum(_tree_leaves(c, d - 1) for c in t)


def aut_order(e, n: int) -> int:
    """Order of the automorphism group of the forest (levelwise bijections)."""
    if n == 0:
        return factorial(e)
    return _forest_aut(e, n)


def _forest_aut(trees, d):
    out = 1
    counts: dict = {}
    for t in trees:
        counts[t] = counts.get(t, 0) + 1
    for t, k in counts.items():
        out *= factorial(k) * _tree_aut(t, d) ** k
    return out


def _tree_aut(t, d):
    return factorial(t) if d == 1 else _forest_aut(t, d - 1)


# structure maps on explicit forests

def _remove_depth(forest, k):
    """Delete the nodes at depth ``k`` (roots have depth 0)."""
    if k == 0:
        return [c for t in forest for c in t]
    return [_remove_in(t, k) for t in forest]


def _remove_in(t, k):
    if k == 1:
        return tuple(g for c in t for g in c)
    return tuple(_remove_in(c, k - 1) for c in t)


def _wrap_depth(forest, k):
    """Give every node at depth ``k`` a new unary parent."""
    if k == 0:
        return [(t,) for t in forest]
    return [_wrap_in(t, k) for t in forest]


def _wrap_in(t, k):
    if k == 1:
        return tuple((c,) for c in t)
    return tuple(_wrap_in(c, k - 1) for c in t)


def face(e, n: int, i: int):
    """``d_i`` on an ``n``-string: drop or compose at ``A_i`` (depth ``n - i``)."""
    return encode(_remove_depth(decode(e, n), n - i), n - 1)


def degeneracy(e, n: int, i: int):
    """``s_i``: insert an identity at ``A_i``."""
    return encode(_wrap_depth(decode(e, n), n - i), n + 1)


def union(a, b, n: int):
    if n == 0:
        return a + b
    return tuple(sorted(a + b, reverse=True))


# enumeration

def _trees(d, k, budget):
    """Encoded trees of depth ``d`` with exactly ``k`` leaves."""
    if d == 1:
        return [k]
    return [f for f in _forests(d - 1, k, budget) if f]


def _forests(d, k, budget):
    """Encoded forests of depth ``d >= 1`` with exactly ``k`` leaves."""
    pool = []
    for j in range(1, k + 1):
        pool.extend((t, j) for t in _trees(d, j, budget))
    pool.sort(key=lambda p: p[0], reverse=True)
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} classes; raise {BUDGET_ENV}")
            return
        for idx in range(start, len(pool)):
            t, j = pool[idx]
            if j <= remaining:
                acc.append(t)
                rec(idx, remaining - j, acc)
                acc.pop()

    rec(0, k, [])
    return out


def finite_surjections_weighted(max_n: int, top_level: int = 3) -> tuple:
    """Classes of surjection strings between sets of size ``<= max_n``.

    Returns ``(X, M)`` with ``M`` the disjoint-union product (defined while
    the total size stays within ``max_n``; beyond that the ambient
    ``forest-union`` product on fibre multisets applies).
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    budget = enumeration_budget()
    enc = []
    for n in range(top_level + 1):
        if n == 0:
            level = list(range(max_n + 1))
        else:
            level = [f for k in range(max_n + 1) for f in _forests(n, k, budget)]
        enc.append(level)
        if sum(map(len, enc)) > budget:
            raise BudgetExceeded(f"more than {budget} classes; raise {BUDGET_ENV}")
    levels = [[label(e, n) for e in level] for n, level in enumerate(enc)]
    faces = {(n, i): {label(e, n): label(face(e, n, i), n - 1) for e in enc[n]}
             for n in range(1, top_level + 1) for i in range(n + 1)}
    degs = {(n, i): {label(e, n): label(degeneracy(e, n, i), n + 1) for e in enc[n]}
            for n in range(top_level) for i in range(n + 1)}
    aut = [{label(e, n): aut_order(e, n) for e in level} for n, level in enumerate(enc)]
    X = WeightedClassData(levels, faces, degs, aut)
    product = []
    for n, level in enumerate(enc):
        size = {e: leaves(e, n) for e in level}
        product.append({(label(a, n), label(b, n)): label(union(a, b, n), n)
                        for a in level for b in level if size[a] + size[b] <= max_n})
    return X, MonoidalStructure("0", product, ambient="forest-union")


def surjection_class(fibres) -> str:
    """Level-1 label of a surjection with the given fibre sizes."""
    return label(tuple(sorted(fibres, reverse=True)), 1)
