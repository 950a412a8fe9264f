"""Independent reference computations used to cross-check the bialgebra.

None of these touch simplicial data: they work from posets, categories or
concrete finite sets directly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb, factorial

from .builders.nerve import FiniteCategorySpec


def classical_mobius(elements, leq) -> dict:
    """``μ(x, y) = -Σ_{x <= z < y} μ(x, z)``, ``μ(x, x) = 1``, on all pairs ``x <= y``."""
    elements = list(elements)
    mu = {}
    for x in elements:
        above = [y for y in elements if leq(x, y)]
        # process in an order compatible with <=: by size of the down-set inside [x, y]
        above.sort(key=lambda y: sum(1 for z in above if leq(z, y)))
        for y in above:
            if y == x:
                mu[x, y] = 1
            else:
                mu[x, y] = -sum(mu[x, z] for z in above if leq(z, y) and z != y)
    return mu


def _nonidentity_strings(C: FiniteCategorySpec, f: str, max_len: int):
    """Strings ``(a_1, ..., a_k)`` of non-identity arrows with ``a_k ∘ ... ∘ a_1 = f``."""
    src, tgt = C.arrows[f]
    out = []
    nonid = [a for a in C.arrows if not C.is_identity(a)]

    def rec(obj, acc, comp):
        if acc and obj == tgt and comp == f:
            out.append(tuple(acc))
        if len(acc) == max_len:
            return
        for a in nonid:
            if C.source(a) == obj:
                rec(C.target(a), acc + [a], a if comp is None else C.compose(a, comp))

    rec(src, [], None)
    return out


def schmitt_antipode(C: FiniteCategorySpec, f: str, mul, unit: str, max_len: int = 32) -> dict:
    """``S(f) = Σ_k (-1)^k Σ a_1 ⋯ a_k`` over strings of non-identity arrows.

    ``mul`` multiplies arrow labels; identities contribute the ``unit`` term.
    """
    out: dict = {}
    if C.is_identity(f):
        out[unit] = 1
    for s in _nonidentity_strings(C, f, max_len):
        label = s[0]
        for a in s[1:]:
            label = mul(label, a)
        out[label] = out.get(label, 0) + (-1) ** len(s)
    return {k: Fraction(v) for k, v in out.items() if v}


def schmitt_recursive(C: FiniteCategorySpec, f: str, mul, unit: str) -> dict:
    """``S(f) = [f = id] unit - Σ_{b∘a = f, b ≠ id} S(a) b``."""
    @lru_cache(maxsize=None)
    def S(g):
        out: dict = {}
        if C.is_identity(g):
            out[unit] = Fraction(1)
        src, tgt = C.arrows[g]
        for a, (s, m) in C.arrows.items():
            if s != src:
                continue
            for b, (m2, t) in C.arrows.items():
                if m2 != m or t != tgt or C.is_identity(b) or C.compose(b, a) != g:
                    continue
                for x, v in dict(S(a)).items():
                    z = mul(x, b)
                    out[z] = out.get(z, 0) - v
        return tuple(sorted((k, v) for k, v in out.items() if v))

    return dict(S(f))


def binomial_antipode(n_max: int) -> dict:
    """Antipode of the binomial Hopf algebra ``Δ(x_n) = Σ C(n,k) x_k ⊗ x_{n-k}``,
    by the recursion ``S(x_n) = -Σ_{k<n} C(n,k) S(x_k) x_{n-k}`` (``n >= 1``).

    Values are returned as ``{n: {m: coefficient}}`` with ``x_a x_b = x_{a+b}``.
    """
    S = {0: {0: Fraction(1)}}
    for n in range(1, n_max + 1):
        out: dict = {}
        for k in range(n):
            for m, v in S[k].items():
                out[m + n - k] = out.get(m + n - k, 0) - comb(n, k) * v
        S[n] = {m: v for m, v in out.items() if v}
    return S


def binomial_mobius(n_max: int) -> dict:
    """Möbius function of the Boolean lattice ``B_n`` from the poset recursion."""
    out = {}
    for n in range(n_max + 1):
        elements = range(1 << n)
        mu = classical_mobius(elements, lambda a, b: a & ~b == 0)
        out[n] = mu[0, (1 << n) - 1]
    return out


# ---------------------------------------------------------------------------
# concrete finite surjections

def surjections(m: int, k: int):
    """All surjections ``{0..m-1} -> {0..k-1}`` as tuples."""
    return [f for f in product(range(k), repeat=m) if len(set(f)) == k]


def fibre_sizes(f, k: int) -> tuple:
    return tuple(sorted((f.count(j) for j in range(k)), reverse=True))


def representative(fibres) -> tuple:
    """A concrete surjection with the given fibre sizes."""
    out = []
    for j, size in enumerate(fibres):
        out.extend([j] * size)
    return tuple(out)


def surjection_coproduct(fibres) -> dict:
    """Homotopy-fibre cardinalities of the factorisations of a surjection.

    For a representative ``f: m ->> k`` every concrete factorisation
    ``f = b∘a`` through ``{0..j-1}`` is enumerated; each isomorphism class of
    middle objects is weighted by ``1/j!``.  Returns
    ``{(fibres(a), fibres(b)): coefficient}``.
    """
    f = representative(fibres)
    m, k = len(f), len(fibres)
    out: dict = {}
    for j in range(k, m + 1):
        for a in surjections(m, j):
            for b in surjections(j, k):
                if all(b[a[i]] == f[i] for i in range(m)):
                    key = (fibre_sizes(a, j), fibre_sizes(b, k))
                    out[key] = out.get(key, 0) + Fraction(1, factorial(j))
    return out


def surjection_aut(fibres) -> int:
    """Pairs of permutations ``(σ, τ)`` with ``f σ = τ f``, counted by brute force."""
    f = representative(fibres)
    m, k = len(f), len(fibres)
    count = 0
    for tau in permutations(range(k)):
        for sigma in permutations(range(m)):
            if all(f[sigma[i]] == tau[f[i]] for i in range(m)):
                count += 1
    return count


# ---------------------------------------------------------------------------
# Faa di Bruno through series reversion

def _pmul(p, q):
    out: dict = {}
    for a, u in p.items():
        for b, v in q.items():
            m = tuple(sorted(a + b, reverse=True))
            out[m] = out.get(m, 0) + u * v
    return {m: c for m, c in out.items() if c}


def _smul(f, g, N):
    out = [dict() for _ in range(N + 1)]
    for i, p in enumerate(f):
        if not p:
            continue
        for j in range(N + 1 - i):
            if g[j]:
                for m, c in _pmul(p, g[j]).items():
                    out[i + j][m] = out[i + j].get(m, 0) + c
    return out


def reversion_antipode(n_max: int) -> dict:
    """Antipode of the Faà di Bruno Hopf algebra from compositional inversion.

    With ``f(x) = x + Σ_{n>=2} a_n x^n / n!`` the antipode sends ``a_n`` to the
    coordinate ``a_n`` of the compositional inverse of ``f``.  Values are
    ``{n: {parts: coefficient}}`` where ``parts`` is the descending tuple of
    indices of a monomial ``a_{p1} a_{p2} ...`` (the empty tuple is 1).
    """
    N = n_max
    g = [dict() for _ in range(N + 1)]
    if N >= 1:
        g[1] = {(): Fraction(1)}
    for _ in range(N):
        new = [dict() for _ in range(N + 1)]
        if N >= 1:
            new[1] = {(): Fraction(1)}
        power = g
        for n in range(2, N + 1):
            power = _smul(power, g, N)
            for d in range(N + 1):
                for m, c in power[d].items():
                    key = tuple(sorted(m + (n,), reverse=True))
                    new[d][key] = new[d].get(key, 0) - c / factorial(n)
        g = [{m: c for m, c in p.items() if c} for p in new]
    return {n: {m: c * factorial(n) for m, c in g[n].items()} for n in range(2, N + 1)}
