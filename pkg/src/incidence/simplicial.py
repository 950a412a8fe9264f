"""Truncated simplicial sets, weighted class data, monoidal structure, and the
structural checks the incidence-bialgebra construction relies on.

Simplices are opaque string ids.  Level ``n`` holds the ``n``-simplices;
``face[n, i]`` maps level ``n`` to level ``n-1`` and ``degeneracy[n, i]``
maps level ``n`` to level ``n+1``.  A :class:`WeightedClassData` carries,
in addition, the automorphism order of every class, i.e. it is the
isomorphism-class shadow of a simplicial groupoid.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from . import ambient as _ambient
from .errors import CompletenessFailure, MalformedInput, UndefinedProduct


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "witnesses": _plain(self.witnesses), "info": _plain(self.info)}


def _plain(x):
    if isinstance(x, Mapping):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=str) if isinstance(x, (set, frozenset)) else x
        return [_plain(y) for y in items]
    if isinstance(x, Fraction):
        return str(x)
    return x


ValidationReport = CheckResult


class TruncatedSimplicialSet:
    """Levels ``0..N`` of a simplicial set with face and degeneracy maps."""

    weighted = False

    def __init__(self, levels: Iterable[Iterable[str]], face: Mapping, degeneracy: Mapping):
        self.levels = tuple(tuple(level) for level in levels)
        if not self.levels:
            raise MalformedInput("at least level 0 is required")
        self.face = MappingProxyType({k: MappingProxyType(dict(v)) for k, v in face.items()})
        self.degeneracy = MappingProxyType(
            {k: MappingProxyType(dict(v)) for k, v in degeneracy.items()})
        self._members = tuple(frozenset(level) for level in self.levels)
        self._cache: dict = {}

    @property
    def N(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> tuple:
        return self.levels[n]

    def contains(self, n: int, x) -> bool:
        return 0 <= n <= self.N and x in self._members[n]

    def d(self, n: int, i: int, x: str) -> str:
        return self.face[n, i][x]

    def s(self, n: int, i: int, x: str) -> str:
        return self.degeneracy[n, i][x]

    def aut(self, n: int, x: str) -> int:
        return 1

    def restrict(self, n: int, x: str, vertices: Iterable[int]) -> str:
        """The face of the ``n``-simplex ``x`` spanned by ``vertices``."""
        keep = set(vertices)
        m = n
        for v in range(n, -1, -1):
            if v not in keep:
                x = self.d(m, v, x)
                m -= 1
        return x

    def degenerate_iterate(self, x: str, n: int) -> str:
        """``s_0^n`` applied to a vertex."""
        for k in range(n):
            x = self.s(k, 0, x)
        return x

    def __repr__(self):
        sizes = ",".join(str(len(level)) for level in self.levels)
        return f"{type(self).__name__}(N={self.N}, sizes=[{sizes}])"


class WeightedClassData(TruncatedSimplicialSet):
    """Isomorphism classes of a simplicial groupoid with automorphism orders."""

    weighted = True

    def __init__(self, levels, face, degeneracy, aut: Iterable[Mapping[str, int]]):
        super().__init__(levels, face, degeneracy)
        self.aut_orders = tuple(MappingProxyType(dict(a)) for a in aut)
        if len(self.aut_orders) != len(self.levels):
            raise MalformedInput("aut data must be given for every level")

    def aut(self, n: int, x: str) -> int:
        return self.aut_orders[n][x]


class MonoidalStructure:
    """Unit vertex and levelwise partial products.

    ``product[n]`` maps pairs of ``n``-simplices to an ``n``-simplex.  The
    optional ``ambient`` names a total product on level-1 labels (see
    :mod:`incidence.ambient`) used when a product leaves the truncated carrier.
    """

    def __init__(self, unit: str, product: Iterable[Mapping], ambient: str | None = None):
        self.unit = unit
        self.product = tuple(MappingProxyType(dict(p)) for p in product)
        self.ambient = ambient
        self._ambient_fn: Callable | None = _ambient.get(ambient) if ambient else None

    def mul(self, n: int, a: str, b: str) -> str | None:
        if n < len(self.product):
            return self.product[n].get((a, b))
        return None

    def mul1(self, a: str, b: str) -> str | None:
        """Level-1 product, falling back to the ambient product."""
        c = self.mul(1, a, b)
        if c is None and self._ambient_fn is not None:
            c = self._ambient_fn(a, b)
        return c

    def eta(self, X: TruncatedSimplicialSet, n: int) -> str:
        return X.degenerate_iterate(self.unit, n)


# ---------------------------------------------------------------------------
# validation

def _check_maps(X: TruncatedSimplicialSet, problems: list) -> None:
    for n in range(1, X.N + 1):
        for i in range(n + 1):
            _check_map(X, "face", (n, i), X.face.get((n, i)), n, n - 1, problems)
    for n in range(X.N):
        for i in range(n + 1):
            _check_map(X, "degeneracy", (n, i), X.degeneracy.get((n, i)), n, n + 1, problems)


def _check_map(X, kind, key, mapping, src, tgt, problems):
    if mapping is None:
        problems.append({"kind": "missing-map", "map": kind, "key": list(key)})
        return
    src_set, tgt_set = X._members[src], X._members[tgt]
    if set(mapping) != src_set:
        problems.append({"kind": "map-not-total", "map": kind, "key": list(key),
                         "missing": sorted(src_set - set(mapping)),
                         "extra": sorted(set(mapping) - src_set)})
    for x, y in mapping.items():
        if y not in tgt_set:
            problems.append({"kind": "out-of-range", "map": kind, "key": list(key),
                             "simplex": x, "value": y})


def validate_structure(X: TruncatedSimplicialSet) -> ValidationReport:
    """Check all simplicial identities within the truncation.

    Malformed maps are reported, never raised.
    """
    problems: list = []
    for n, level in enumerate(X.levels):
        if len(set(level)) != len(level):
            problems.append({"kind": "duplicate-ids", "level": n})
    _check_maps(X, problems)
    if problems:
        return CheckResult("validate_structure", False, problems)

    d, s = X.d, X.s

    def bad(identity, n, x, lhs, rhs):
        problems.append({"kind": "identity", "identity": identity, "level": n,
                         "simplex": x, "lhs": lhs, "rhs": rhs})

    N = X.N
    for n in range(2, N + 1):
        for x in X.levels[n]:
            for j in range(1, n + 1):
                for i in range(j):
                    lhs = d(n - 1, i, d(n, j, x))
                    rhs = d(n - 1, j - 1, d(n, i, x))
                    if lhs != rhs:
                        bad(f"d_{i} d_{j} = d_{j - 1} d_{i}", n, x, lhs, rhs)
    for n in range(N):
        for x in X.levels[n]:
            for j in range(n + 1):
                y = s(n, j, x)
                for i in range(n + 2):
                    lhs = d(n + 1, i, y)
                    if i < j:
                        rhs = s(n - 1, j - 1, d(n, i, x))
                        name = f"d_{i} s_{j} = s_{j - 1} d_{i}"
                    elif i in (j, j + 1):
                        rhs = x
                        name = f"d_{i} s_{j} = id"
                    else:
                        rhs = s(n - 1, j, d(n, i - 1, x))
                        name = f"d_{i} s_{j} = s_{j} d_{i - 1}"
                    if lhs != rhs:
                        bad(name, n, x, lhs, rhs)
    for n in range(N - 1):
        for x in X.levels[n]:
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = s(n + 1, i, s(n, j, x))
                    rhs = s(n + 1, j + 1, s(n, i, x))
                    if lhs != rhs:
                        bad(f"s_{i} s_{j} = s_{j + 1} s_{i}", n, x, lhs, rhs)
    for (n, i), mapping in X.degeneracy.items():
        seen: dict = {}
        for x, y in mapping.items():
            if y in seen:
                problems.append({"kind": "degeneracy-not-injective", "map": [n, i],
                                 "simplices": [seen[y], x], "value": y})
            seen[y] = x
    if X.weighted:
        for n, level in enumerate(X.levels):
            for x in level:
                if X.aut(n, x) < 1:
                    problems.append({"kind": "aut-order", "level": n, "simplex": x})
        for n in range(N):
            for x in X.levels[n]:
                y = s(n, 0, x)
                if X.aut(n + 1, y) != X.aut(n, x):
                    problems.append({"kind": "s0-not-full", "level": n, "simplex": x,
                                     "aut": X.aut(n, x), "aut_s0": X.aut(n + 1, y)})
    return CheckResult("validate_structure", not problems, problems)


def validate_monoidal(X: TruncatedSimplicialSet, M: MonoidalStructure) -> CheckResult:
    """Product is a simplicial map where defined, unital and associative."""
    problems = []
    if not X.contains(0, M.unit):
        return CheckResult("validate_monoidal", False, [{"kind": "unit-missing", "unit": M.unit}])
    for n in range(min(X.N + 1, len(M.product))):
        table = M.product[n]
        eta = M.eta(X, n)
        for (a, b), c in table.items():
            if not (X.contains(n, a) and X.contains(n, b) and X.contains(n, c)):
                problems.append({"kind": "product-out-of-range", "level": n, "pair": [a, b]})
                continue
            for i in range(n + 1 if n else 0):
                fa, fb, fc = X.d(n, i, a), X.d(n, i, b), X.d(n, i, c)
                got = M.mul(n - 1, fa, fb)
                if got is not None and got != fc:
                    problems.append({"kind": "face-compat", "level": n, "face": i,
                                     "pair": [a, b], "expected": fc, "got": got})
            if n < X.N:
                for i in range(n + 1):
                    sa, sb, sc = X.s(n, i, a), X.s(n, i, b), X.s(n, i, c)
                    got = M.mul(n + 1, sa, sb)
                    if got is not None and got != sc:
                        problems.append({"kind": "degeneracy-compat", "level": n, "degeneracy": i,
                                         "pair": [a, b], "expected": sc, "got": got})
        for x in X.levels[n]:
            for pair, want in (((eta, x), x), ((x, eta), x)):
                got = table.get(pair)
                if got is not None and got != want:
                    problems.append({"kind": "unit-law", "level": n, "simplex": x, "got": got})
        for (a, b), ab in table.items():
            for (b2, c), bc in table.items():
                if b2 != b:
                    continue
                left, right = table.get((ab, c)), table.get((a, bc))
                if left is not None and right is not None and left != right:
                    problems.append({"kind": "associativity", "level": n,
                                     "triple": [a, b, c], "left": left, "right": right})
    return CheckResult("validate_monoidal", not problems, problems)


# ---------------------------------------------------------------------------
# nondegenerate simplices

def degenerate_simplices(X: TruncatedSimplicialSet, n: int) -> frozenset:
    key = ("degenerate", n)
    if key not in X._cache:
        if n == 0:
            X._cache[key] = frozenset()
        else:
            X._cache[key] = frozenset(
                X.s(n - 1, i, x) for i in range(n) for x in X.levels[n - 1])
    return X._cache[key]


def nondegenerate_simplices(X: TruncatedSimplicialSet, n: int) -> tuple:
    """Level-``n`` simplices outside the image of every degeneracy, in level order.

    For ``n >= 1`` the result is cross-checked against the principal-edge
    criterion; a disagreement raises :class:`CompletenessFailure`.
    """
    if n > X.N or n < 0:
        raise ValueError(f"level {n} outside truncation 0..{X.N}")
    key = ("nondegenerate", n)
    if key in X._cache:
        return X._cache[key]
    degen = degenerate_simplices(X, n)
    result = tuple(x for x in X.levels[n] if x not in degen)
    if n >= 1:
        nd1 = set(X.levels[1]) - degenerate_simplices(X, 1)
        members = set(result)
        for x in X.levels[n]:
            by_edges = all(e in nd1 for e in principal_edges(X, n, x))
            if by_edges != (x in members):
                raise CompletenessFailure(
                    f"principal-edge criterion disagrees on {x!r} at level {n}",
                    witness={"level": n, "simplex": x, "nondegenerate": x in members,
                             "principal_edges": list(principal_edges(X, n, x))})
    X._cache[key] = result
    return result


def long_edge(X: TruncatedSimplicialSet, n: int, x: str) -> str:
    if n == 0:
        return X.s(0, 0, x)
    return X.restrict(n, x, (0, n))


def principal_edges(X: TruncatedSimplicialSet, n: int, x: str) -> tuple:
    return tuple(X.restrict(n, x, (k - 1, k)) for k in range(1, n + 1))


def principal_data(X: TruncatedSimplicialSet, n: int, x: str) -> tuple:
    """``(long edge, principal edges)`` of an ``n``-simplex, ``n >= 1``."""
    if n < 1:
        raise ValueError("principal data needs n >= 1")
    return long_edge(X, n, x), principal_edges(X, n, x)


# ---------------------------------------------------------------------------
# pullback squares, decomposition and CULF

def pullback_square(name: str, top: Iterable, to_b: Callable, to_c: Callable,
                    b_set: Iterable, c_set: Iterable, b_to_d: Callable, c_to_d: Callable,
                    aut_top: Callable = None, aut_b: Callable = None,
                    aut_c: Callable = None, aut_d: Callable = None,
                    limit: int = 20) -> CheckResult:
    """Check that a commutative square of finite groupoids is a pullback.

    Works on isomorphism classes: for every ``b``, ``c`` over the same ``d``
    the classes of the top corner lying over ``(b, c)`` must satisfy
    ``sum aut(b)/aut(p) == aut(d)/aut(c)`` (homotopy fibres agree).  With all
    automorphism orders 1 this says ``top -> B x_D C`` is a bijection.
    """
    one = lambda x: 1  # noqa: E731
    aut_top, aut_b = aut_top or one, aut_b or one
    aut_c, aut_d = aut_c or one, aut_d or one
    fibre: dict = defaultdict(Fraction)
    witnesses = []
    for p in top:
        b, c = to_b(p), to_c(p)
        if b_to_d(b) != c_to_d(c):
            witnesses.append({"kind": "not-commutative", "element": p, "b": b, "c": c})
            continue
        fibre[b, c] += Fraction(aut_b(b), aut_top(p))
    c_by_d = defaultdict(list)
    for c in c_set:
        c_by_d[c_to_d(c)].append(c)
    checked = 0
    for b in b_set:
        dv = b_to_d(b)
        for c in c_by_d.get(dv, ()):
            checked += 1
            want = Fraction(aut_d(dv), aut_c(c))
            got = fibre.get((b, c), Fraction(0))
            if got != want:
                witnesses.append({"kind": "fibre-mismatch", "b": b, "c": c, "d": dv,
                                  "fibre": got, "expected": want})
                if len(witnesses) >= limit:
                    break
        if len(witnesses) >= limit:
            break
    return CheckResult(name, not witnesses, witnesses, {"pairs_checked": checked})


def _path_space_square(X, k, side):
    """Segal square for level ``k`` of the lower (apex first) or upper path space."""
    n = k + 1  # P_k = X_{k+1}

    def to_x(vertices, m):
        # P-vertices -> X-vertices for a P_m simplex living in X_{m+1}
        if side == "lower":
            return [0] + [v + 1 for v in vertices]
        return list(vertices) + [m + 1]

    def res(m, x, vertices):
        return X.restrict(m + 1, x, to_x(vertices, m))

    aut = lambda m: (lambda x: X.aut(m + 1, x))  # noqa: E731
    return pullback_square(
        f"{side} path space Segal, level {k}",
        X.levels[n],
        lambda x: res(k, x, range(k)),
        lambda x: res(k, x, (k - 1, k)),
        X.levels[k], X.levels[2],
        lambda y: res(k - 1, y, (k - 1,)),
        lambda z: res(1, z, (0,)),
        aut(k), aut(k - 1), aut(1), aut(0),
    )


def check_decomposition(X: TruncatedSimplicialSet, up_to: int | None = None) -> CheckResult:
    """Decomposition-space axiom via Segal conditions on both path spaces."""
    if up_to is None:
        up_to = X.N - 1
    if up_to > X.N - 1:
        raise ValueError(f"up_to={up_to} needs level {up_to + 1} > N={X.N}")
    witnesses, info = [], {}
    for side in ("lower", "upper"):
        for k in range(2, up_to + 1):
            r = _path_space_square(X, k, side)
            info[r.name] = r.passed
            for w in r.witnesses:
                witnesses.append({"square": r.name, **w})
    return CheckResult("check_decomposition", not witnesses, witnesses, info)


def check_culf_monoidal(X: TruncatedSimplicialSet, M: MonoidalStructure,
                        up_to: int | None = None) -> CheckResult:
    """Long-edge squares for the product and the unit are pullbacks."""
    if up_to is None:
        up_to = min(X.N, len(M.product) - 1)
    witnesses, info, undefined = [], {}, []
    mul1 = M.product[1]
    by_value = defaultdict(list)
    for (a, b), c in mul1.items():
        by_value[c].append((a, b))
    for n in range(0, up_to + 1):
        g = (lambda x, n=n: long_edge(X, n, x))
        over = defaultdict(list)
        for x in X.levels[n]:
            over[g(x)].append(x)
        top = []
        for (a, b) in mul1:
            for x in over.get(a, ()):
                for y in over.get(b, ()):
                    if M.mul(n, x, y) is None:
                        undefined.append((n, x, y))
                    else:
                        top.append((x, y))
        for (x, y) in top:
            if g(M.mul(n, x, y)) != mul1[g(x), g(y)]:
                witnesses.append({"square": f"product level {n}", "kind": "long-edge-compat",
                                  "pair": [x, y]})
        r = pullback_square(
            f"product level {n}", top,
            lambda p, n=n: M.mul(n, *p),
            lambda p: (g(p[0]), g(p[1])),
            X.levels[n], list(mul1),
            g, lambda ab: mul1[ab],
            lambda p, n=n: X.aut(n, p[0]) * X.aut(n, p[1]),
            lambda x, n=n: X.aut(n, x),
            lambda ab: X.aut(1, ab[0]) * X.aut(1, ab[1]),
            lambda f: X.aut(1, f),
        )
        info[r.name] = r.passed
        witnesses.extend({"square": r.name, **w} for w in r.witnesses)
        eta1, etan = M.eta(X, 1), M.eta(X, n)
        fib = over.get(eta1, [])
        ok = fib == [etan] and X.aut(n, etan) == X.aut(0, M.unit)
        info[f"unit level {n}"] = ok
        if not ok:
            witnesses.append({"square": f"unit level {n}", "kind": "unit-fibre",
                              "fibre": fib, "expected": [etan]})
    if undefined:
        raise UndefinedProduct(f"{len(undefined)} products undefined within truncation",
                               witness=[list(u) for u in undefined[:20]])
    return CheckResult("check_culf_monoidal", not witnesses, witnesses, info)


@dataclass
class FinitenessReport:
    N: int
    lengths: dict
    unsafe: frozenset

    @property
    def max_length(self) -> int:
        return max(self.lengths.values(), default=0)

    def certified(self, f) -> bool:
        return f not in self.unsafe


def check_finiteness(X: TruncatedSimplicialSet) -> FinitenessReport:
    """Length of every 1-simplex as witnessed inside the truncation."""
    lengths = {f: 0 for f in X.levels[1]} if X.N >= 1 else {}
    for n in range(1, X.N + 1):
        for x in nondegenerate_simplices(X, n):
            f = long_edge(X, n, x)
            if lengths.get(f, 0) < n:
                lengths[f] = n
    unsafe = frozenset(f for f, n in lengths.items() if X.N >= 1 and n == X.N)
    return FinitenessReport(X.N, lengths, unsafe)


# ---------------------------------------------------------------------------
# construction from nondegenerate data

def _surjection_faces(surj: tuple, i: int):
    """Precompose a monotone surjection [n]->[k] with the coface delta_i."""
    t = surj[:i] + surj[i + 1:]
    k = surj[-1] if surj else -1
    image = set(t)
    missing = [j for j in range(k + 1) if j not in image]
    if not missing:
        return t, None
    j = missing[0]
    return tuple(v - 1 if v > j else v for v in t), j


def from_nondegenerate(nondegenerate: Mapping[int, Mapping[str, tuple]], N: int
                       ) -> TruncatedSimplicialSet:
    """Simplicial set generated freely by degeneracies from nondegenerate simplices.

    ``nondegenerate[k][x]`` lists the ``k+1`` faces of ``x`` (for ``k >= 1``)
    as ids of simplices of dimension ``k-1``, which may themselves be
    degenerate ids produced by this construction (e.g. ``"s0(a)"``).
    """
    def name(surj, x):
        js = [str(j) for j in range(len(surj) - 1) if surj[j] == surj[j + 1]]
        return f"s{','.join(js)}({x})" if js else x

    dims = {x: k for k, xs in nondegenerate.items() for x in xs}
    parsed: dict = {}

    def parse(label):
        # inverse of name(): returns (surjection, nondegenerate id)
        if label in dims:
            k = dims[label]
            return tuple(range(k + 1)), label
        if label in parsed:
            return parsed[label]
        raise MalformedInput(f"unknown simplex {label!r}")

    levels = [[] for _ in range(N + 1)]
    table: dict = {}
    for k in sorted(nondegenerate):
        for x in nondegenerate[k]:
            for n in range(k, N + 1):
                for surj in _surjections(n, k):
                    lab = name(surj, x)
                    parsed[lab] = (surj, x)
                    table[lab] = (n, surj, x)
                    levels[n].append(lab)

    def face(n, i, label):
        surj, x = parse(label)
        t, j = _surjection_faces(surj, i)
        if j is None:
            return name(t, x)
        k = dims[x]
        fx = nondegenerate[k][x][j]
        fs, fy = parse(fx)
        return name(tuple(fs[v] for v in t), fy)

    def degen(n, i, label):
        surj, x = parse(label)
        return name(surj[: i + 1] + surj[i:], x)

    faces = {(n, i): {y: face(n, i, y) for y in levels[n]}
             for n in range(1, N + 1) for i in range(n + 1)}
    degs = {(n, i): {y: degen(n, i, y) for y in levels[n]}
            for n in range(N) for i in range(n + 1)}
    return TruncatedSimplicialSet(levels, faces, degs)


def _surjections(n: int, k: int):
    """Monotone surjections [n] -> [k] as value tuples."""
    def rec(pos, last):
        if pos == n + 1:
            if last == k:
                yield ()
            return
        for v in (last, last + 1):
            if v <= k and (pos > 0 or v == 0):
                for rest in rec(pos + 1, v):
                    yield (v,) + rest
    return list(rec(0, 0)) if n >= 0 else []


# ---------------------------------------------------------------------------
# JSON

def to_json(X: TruncatedSimplicialSet, M: MonoidalStructure | None = None) -> dict:
    """Document form; weighted data uses ``classes`` in place of ``levels``."""
    doc: dict = {}
    if X.weighted:
        doc["classes"] = [[{"id": x, "aut_order": X.aut(n, x)} for x in level]
                          for n, level in enumerate(X.levels)]
    else:
        doc["levels"] = [list(level) for level in X.levels]
    doc["face"] = {f"{n},{i}": [X.d(n, i, x) for x in X.levels[n]]
                   for n in range(1, X.N + 1) for i in range(n + 1)}
    doc["degeneracy"] = {f"{n},{i}": [X.s(n, i, x) for x in X.levels[n]]
                         for n in range(X.N) for i in range(n + 1)}
    if M is not None:
        order = [{x: k for k, x in enumerate(level)} for level in X.levels]
        product = []
        for n, table in enumerate(M.product):
            idx = order[n] if n <= X.N else {}
            triples = sorted(table.items(),
                             key=lambda kv: (idx.get(kv[0][0], -1), idx.get(kv[0][1], -1)))
            product.append([[a, b, c] for (a, b), c in triples])
        mono = {"unit": M.unit, "product": product}
        if M.ambient:
            mono["ambient"] = M.ambient
        if X.weighted:
            doc["unit"] = M.unit
            doc["product"] = product
            if M.ambient:
                doc["ambient"] = M.ambient
        else:
            doc["monoidal"] = mono
    return doc


def from_json(doc: Mapping) -> tuple:
    """Inverse of :func:`to_json`; returns ``(X, M or None)``."""
    try:
        if "classes" in doc:
            levels = [[c["id"] for c in level] for level in doc["classes"]]
            aut = [{c["id"]: int(c["aut_order"]) for c in level} for level in doc["classes"]]
        else:
            levels = doc["levels"]
            aut = None
        face, degeneracy = {}, {}
        for key, values in doc.get("face", {}).items():
            n, i = map(int, key.split(","))
            face[n, i] = dict(zip(levels[n], values))
            if len(values) != len(levels[n]):
                raise MalformedInput(f"face {key} has wrong length")
        for key, values in doc.get("degeneracy", {}).items():
            n, i = map(int, key.split(","))
            degeneracy[n, i] = dict(zip(levels[n], values))
            if len(values) != len(levels[n]):
                raise MalformedInput(f"degeneracy {key} has wrong length")
        X = (WeightedClassData(levels, face, degeneracy, aut) if aut is not None
             else TruncatedSimplicialSet(levels, face, degeneracy))
        mono = doc.get("monoidal")
        if mono is None and "unit" in doc:
            mono = {"unit": doc["unit"], "product": doc.get("product", []),
                    "ambient": doc.get("ambient")}
        M = None
        if mono is not None:
            product = [{(a, b): c for a, b, c in level} for level in mono["product"]]
            M = MonoidalStructure(mono["unit"], product, mono.get("ambient"))
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise MalformedInput(f"malformed simplicial document: {exc}") from exc
    return X, M


def dumps(X: TruncatedSimplicialSet, M: MonoidalStructure | None = None) -> str:
    return json.dumps(to_json(X, M), ensure_ascii=False, indent=1)


def loads(text: str) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    return from_json(doc)
