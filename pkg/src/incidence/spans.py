"""Finite spans over ``X_1`` and constructive isomorphism certificates.

A span ``X_1 <- M -> T`` is stored as its middle tokens and two leg maps.
Composition is the set pullback, convolution goes through ``X_2``.  Two
spans are compared fibrewise over pairs of leg values; when all fibres have
equal size a bijection is built by matching tokens in sorted order, and the
bijection is then replayed against both legs.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import ambient as _ambient
from .errors import ClosureEscape, HypothesisFailed
from .linalg import QMatrix, span_to_matrix
from .simplicial import (CheckResult, MonoidalStructure, TruncatedSimplicialSet,
                         check_finiteness, long_edge, nondegenerate_simplices,
                         principal_edges, pullback_square)

POINT = "*"


def _key(token):
    return json.dumps(token, default=str, ensure_ascii=False)


@dataclass(frozen=True)
class FiniteSpan:
    """``X_1 <-left- middle -right-> T``; tokens carry their provenance."""

    name: str
    middle: tuple
    left: Mapping
    right: Mapping

    def __post_init__(self):
        for t in self.middle:
            if t not in self.left or t not in self.right:
                raise ValueError(f"span {self.name}: legs not total on {t!r}")

    def __len__(self):
        return len(self.middle)

    def fibres(self) -> dict:
        out = defaultdict(list)
        for t in self.middle:
            out[self.left[t], self.right[t]].append(t)
        return out

    def matrix(self, cols: Iterable = ()) -> QMatrix:
        return span_to_matrix(dict(self.left), dict(self.right), cols=cols)

    def restrict(self, columns: Iterable) -> "FiniteSpan":
        keep = set(columns)
        mid = tuple(t for t in self.middle if self.left[t] in keep)
        return FiniteSpan(self.name, mid, {t: self.left[t] for t in mid},
                          {t: self.right[t] for t in mid})


def span_sum(*spans: FiniteSpan, name: str | None = None) -> FiniteSpan:
    """Disjoint union; tokens become ``(summand index, token)``."""
    mid, left, right = [], {}, {}
    for i, S in enumerate(spans):
        for t in S.middle:
            k = (i, t)
            mid.append(k)
            left[k], right[k] = S.left[t], S.right[t]
    return FiniteSpan(name or " + ".join(S.name for S in spans), tuple(mid), left, right)


def compose_spans(first: FiniteSpan, second: FiniteSpan,
                  lift: Callable | None = None, right_of: Callable | None = None) -> FiniteSpan:
    """``second ∘ first``: the pullback ``{(s, t) : right(s) = left(t)}``.

    ``lift(value)`` and ``right_of(token)`` may describe ``second`` on a
    carrier larger than its stored middle set (labels of ambient products).
    """
    right_of = right_of or second.right.__getitem__
    if lift is None:
        by_left = defaultdict(list)
        for t in second.middle:
            by_left[second.left[t]].append(t)
        lift = lambda v: by_left.get(v, ())  # noqa: E731
    mid, left, right = [], {}, {}
    for s in first.middle:
        for t in lift(first.right[s]):
            k = (s, t)
            mid.append(k)
            left[k], right[k] = first.left[s], right_of(t)
    return FiniteSpan(f"{second.name}∘{first.name}", tuple(mid), left, right)


def convolve_spans(X: TruncatedSimplicialSet, S: FiniteSpan, T: FiniteSpan,
                   mul: Callable, name: str | None = None) -> FiniteSpan:
    """Middle ``{(σ, s, t) : σ ∈ X_2, left(s) = d_2σ, left(t) = d_0σ}``,
    left leg ``d_1σ``, right leg ``mul(right(s), right(t))``."""
    s_by, t_by = defaultdict(list), defaultdict(list)
    for s in S.middle:
        s_by[S.left[s]].append(s)
    for t in T.middle:
        t_by[T.left[t]].append(t)
    mid, left, right = [], {}, {}
    for sigma in X.levels[2]:
        ss, ts = s_by.get(X.d(2, 2, sigma)), t_by.get(X.d(2, 0, sigma))
        if not ss or not ts:
            continue
        f = X.d(2, 1, sigma)
        for s in ss:
            for t in ts:
                z = mul(S.right[s], T.right[t])
                if z is None:
                    raise ClosureEscape(
                        f"product {S.right[s]!r}·{T.right[t]!r} escapes the truncation",
                        witness={"simplex": sigma, "pair": [S.right[s], T.right[t]]})
                k = (sigma, s, t)
                mid.append(k)
                left[k], right[k] = f, z
    return FiniteSpan(name or f"{S.name} * {T.name}", tuple(mid), left, right)


def point_mul(a, b):
    return POINT


# ---------------------------------------------------------------------------
# canonical spans

def _fold(M, unit, labels):
    out = labels[0] if labels else unit
    for x in labels[1:]:
        y = M.mul1(out, x)
        if y is None:
            raise ClosureEscape(f"product {out!r}·{x!r} undefined", witness={"pair": [out, x]})
        out = y
    return out


def canonical_span(X: TruncatedSimplicialSet, M: MonoidalStructure | None, kind: str,
                   n: int | None = None) -> FiniteSpan:
    """The spans ``S_n``, ``Id'``, ``e``, ``ζ``, ``Φ_n``, ``ω``, ``Id``, ``ε``."""
    if kind in ("S", "Phi"):
        if n is None or n < 0:
            raise ValueError(f"{kind} needs n >= 0")
        if n > X.N:
            raise ValueError(f"{kind}_{n} needs level {n} > N={X.N}")
    if kind in ("S", "e", "Id'") and M is None:
        raise ClosureEscape(f"span {kind} needs a monoidal structure")
    if kind == "S" and n == 0 or kind == "e":
        eta = M.eta(X, 1)
        mid = tuple(X.levels[0])
        return FiniteSpan("S_0" if kind == "S" else "e", mid,
                          {x: X.s(0, 0, x) for x in mid}, {x: eta for x in mid})
    if kind == "S":
        mid = nondegenerate_simplices(X, n)
        eta = M.eta(X, 1)
        right = {s: _fold(M, eta, list(principal_edges(X, n, s))) for s in mid}
        return FiniteSpan(f"S_{n}", mid, {s: long_edge(X, n, s) for s in mid}, right)
    if kind == "Id'":
        return span_sum(canonical_span(X, M, "S", 0), canonical_span(X, M, "S", 1), name="Id'")
    if kind == "Id":
        mid = tuple(X.levels[1])
        return FiniteSpan("Id", mid, {f: f for f in mid}, {f: f for f in mid})
    if kind == "omega":
        mid = tuple(X.levels[0])
        s0 = {x: X.s(0, 0, x) for x in mid}
        return FiniteSpan("omega", mid, s0, dict(s0))
    if kind == "zeta":
        mid = tuple(X.levels[1])
        return FiniteSpan("zeta", mid, {f: f for f in mid}, {f: POINT for f in mid})
    if kind == "epsilon":
        mid = tuple(X.levels[0])
        return FiniteSpan("epsilon", mid, {x: X.s(0, 0, x) for x in mid},
                          {x: POINT for x in mid})
    if kind == "Phi":
        if n == 0:
            return canonical_span(X, M, "epsilon")
        mid = nondegenerate_simplices(X, n)
        return FiniteSpan(f"Phi_{n}", mid, {s: long_edge(X, n, s) for s in mid},
                          {s: POINT for s in mid})
    raise ValueError(f"unknown span kind {kind!r}")


# ---------------------------------------------------------------------------
# certificates

@dataclass
class SpanIsoCertificate:
    """Explicit bijection between middles, or a fibre where sizes differ."""

    lhs: str
    rhs: str
    valid: bool
    pairs: list = field(default_factory=list)
    counterexample: dict | None = None
    fibres: int = 0
    note: str = ""

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "verdict": "iso" if self.valid else "fail",
                "fibres": self.fibres, "pairs": [[_key(a), _key(b)] for a, b in self.pairs],
                "counterexample": self.counterexample, "note": self.note}


def replay(cert: SpanIsoCertificate, S: FiniteSpan, T: FiniteSpan) -> bool:
    """Re-verify a certificate token by token."""
    if not cert.valid:
        return False
    a = [p[0] for p in cert.pairs]
    b = [p[1] for p in cert.pairs]
    if sorted(map(_key, a)) != sorted(map(_key, S.middle)) or \
            sorted(map(_key, b)) != sorted(map(_key, T.middle)):
        return False
    if len(set(map(_key, a))) != len(a) or len(set(map(_key, b))) != len(b):
        return False
    return all(S.left[x] == T.left[y] and S.right[x] == T.right[y] for x, y in cert.pairs)


def check_span_iso(S: FiniteSpan, T: FiniteSpan) -> SpanIsoCertificate:
    """Match fibres over (left, right) values; lexicographic within each fibre."""
    fs, ft = S.fibres(), T.fibres()
    keys = sorted(set(fs) | set(ft), key=_key)
    pairs = []
    for k in keys:
        a, b = fs.get(k, []), ft.get(k, [])
        if len(a) != len(b):
            return SpanIsoCertificate(S.name, T.name, False, counterexample={
                "left": k[0], "right": k[1], "lhs_size": len(a), "rhs_size": len(b),
                "lhs_tokens": [_key(t) for t in sorted(a, key=_key)[:5]],
                "rhs_tokens": [_key(t) for t in sorted(b, key=_key)[:5]]}, fibres=len(keys))
        pairs.extend(zip(sorted(a, key=_key), sorted(b, key=_key)))
    cert = SpanIsoCertificate(S.name, T.name, True, pairs, fibres=len(keys))
    if not replay(cert, S, T):  # defensive: the construction must replay
        cert.valid = False
        cert.note = "replay failed"
    return cert


def certificate_from_map(S: FiniteSpan, T: FiniteSpan, phi: Callable,
                         note: str = "") -> SpanIsoCertificate:
    """Certificate from an explicit token map ``S.middle -> T.middle``."""
    pairs = [(s, phi(s)) for s in S.middle]
    cert = SpanIsoCertificate(S.name, T.name, True, pairs, fibres=len(S.fibres()), note=note)
    if not replay(cert, S, T):
        bad = next(((s, t) for s, t in pairs if t not in T.left
                    or S.left[s] != T.left[t] or S.right[s] != T.right[t]), None)
        cert.valid = False
        cert.counterexample = {"token": _key(bad[0]) if bad else None,
                               "image": _key(bad[1]) if bad else None,
                               "reason": "legs differ" if bad else "not a bijection"}
    return cert


# ---------------------------------------------------------------------------
# verified identities

@dataclass
class IdentityReport:
    """Certificates for one named identity plus the truncation contract."""

    identity: str
    certificates: list
    exact_columns: tuple = ()
    boundary: dict = field(default_factory=dict)
    matrices_agree: bool = True
    sides: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.certificates) and self.matrices_agree

    def to_json(self) -> dict:
        return {"identity": self.identity, "passed": self.passed,
                "certificates": [{"lhs": c.lhs, "rhs": c.rhs, "valid": c.valid,
                                  "fibres": c.fibres, "tokens": len(c.pairs),
                                  "counterexample": c.counterexample, "note": c.note}
                                 for c in self.certificates],
                "exact_columns": list(self.exact_columns), "boundary": self.boundary,
                "matrices_agree": self.matrices_agree}


def _matrices_equal(S: FiniteSpan, T: FiniteSpan, cols) -> bool:
    return S.matrix(cols) == T.matrix(cols)


def verify_identity(X: TruncatedSimplicialSet, M: MonoidalStructure | None, which: str,
                    n: int) -> IdentityReport:
    """Objective verification of ``lemma-rec``, ``lemma-idprime``, ``theorem``, ``mobius``.

    For ``theorem`` and ``mobius`` the parameter is the level ``L``; the
    telescoped sides differ by the boundary term ``S_{L+1}`` (resp.
    ``Φ_{L+1}``), which is certified as part of the isomorphism and is empty
    over every column of length at most ``L``.
    """
    cols = tuple(X.levels[1])
    mul = M.mul1 if M is not None else None
    sides = []
    if which == "lemma-rec":
        S1, Sn, Sn1 = (canonical_span(X, M, "S", k) for k in (1, n, n + 1))
        lhs = convolve_spans(X, S1, Sn, mul)
        rhs_l = convolve_spans(X, Sn, S1, mul)
        certs = [check_span_iso(Sn1, lhs), check_span_iso(Sn1, rhs_l)]
        if n >= 1:
            certs.append(certificate_from_map(
                Sn1, lhs, lambda s: (X.restrict(n + 1, s, (0, 1, n + 1)),
                                     X.restrict(n + 1, s, (0, 1)),
                                     X.restrict(n + 1, s, range(1, n + 2))),
                note="first principal edge and back face"))
            certs.append(certificate_from_map(
                Sn1, rhs_l, lambda s: (X.restrict(n + 1, s, (0, n, n + 1)),
                                       X.restrict(n + 1, s, range(0, n + 1)),
                                       X.restrict(n + 1, s, (n, n + 1))),
                note="front face and last principal edge"))
        sides = [(Sn1, lhs), (Sn1, rhs_l)]
        agree = all(_matrices_equal(a, b, cols) for a, b in sides)
        return IdentityReport(f"lemma-rec {n}", certs, cols, {}, agree, sides)
    if which == "lemma-idprime":
        idp = canonical_span(X, M, "Id'")
        Sn, Sn1 = canonical_span(X, M, "S", n), canonical_span(X, M, "S", n + 1)
        rhs = span_sum(Sn, Sn1)
        left_side = convolve_spans(X, idp, Sn, mul)
        right_side = convolve_spans(X, Sn, idp, mul)
        sides = [(left_side, rhs), (right_side, rhs)]
        certs = [check_span_iso(a, b) for a, b in sides]
        agree = all(_matrices_equal(a, b, cols) for a, b in sides)
        return IdentityReport(f"lemma-idprime {n}", certs, cols, {}, agree, sides)
    if which in ("theorem", "mobius"):
        return _telescope(X, M, which, n)
    raise ValueError(f"unknown identity {which!r}")


def _telescope(X, M, which, L):
    if L + 1 > X.N:
        raise ValueError(f"level {L} needs the boundary term at level {L + 1} > N={X.N}")
    cols = tuple(X.levels[1])
    if which == "theorem":
        first = canonical_span(X, M, "Id'")
        terms = [canonical_span(X, M, "S", k) for k in range(L + 2)]
        unit = canonical_span(X, M, "e")
        mul = M.mul1
    else:
        first = canonical_span(X, M, "zeta")
        terms = [canonical_span(X, M, "Phi", k) for k in range(L + 2)]
        unit = canonical_span(X, M, "epsilon")
        mul = point_mul
    even = span_sum(*terms[0:L + 1:2], name="even")
    odd = span_sum(*terms[1:L + 1:2], name="odd")
    lhs = convolve_spans(X, first, even, mul, name=f"{first.name} * even")
    rhs = span_sum(unit, convolve_spans(X, first, odd, mul, name=f"{first.name} * odd"))
    boundary = terms[L + 1]
    if L % 2 == 0:
        full = check_span_iso(lhs, span_sum(rhs, boundary))
        sides = [(lhs, span_sum(rhs, boundary))]
    else:
        full = check_span_iso(span_sum(lhs, boundary), rhs)
        sides = [(span_sum(lhs, boundary), rhs)]
    fin = check_finiteness(X)
    exact = tuple(f for f in cols if fin.lengths.get(f, 0) <= L and fin.certified(f))
    restricted = check_span_iso(lhs.restrict(exact), rhs.restrict(exact))
    restricted.note = f"exact on {len(exact)} columns with length <= {L}"
    sides.append((lhs.restrict(exact), rhs.restrict(exact)))
    b_cols = sorted({boundary.left[t] for t in boundary.middle})
    agree = all(_matrices_equal(a, b, cols) for a, b in sides)
    return IdentityReport(f"{which} {L}", [full, restricted], exact,
                          {"term": boundary.name, "tokens": len(boundary),
                           "columns": b_cols}, agree, sides)


# ---------------------------------------------------------------------------
# multiplicative spans and general inversion

@dataclass
class MultiplicativeSpan:
    """``X_1 <-u- F -v-> A`` with ``F`` a finite partial monoid.

    ``lift(value)`` lists the ``F`` elements over an ``X_1`` label; it
    defaults to the fibres of ``u`` on ``F`` and may be widened to labels
    produced by an ambient product.  (The left leg is called ``u`` here even
    though ``u`` also names the monoidal unit object.)
    """

    name: str
    F: tuple
    product: Mapping
    unit: str
    u: Callable
    v: Callable
    A: object
    lift: Callable | None = None
    _fibres: dict | None = field(default=None, init=False, repr=False)

    def fibre(self, value):
        if self.lift is not None:
            return self.lift(value)
        if self._fibres is None:
            self._fibres = defaultdict(list)
            for z in self.F:
                self._fibres[self.u(z)].append(z)
        return self._fibres.get(value, ())

    def span(self) -> FiniteSpan:
        return FiniteSpan(self.name, tuple(self.F), {z: self.u(z) for z in self.F},
                          {z: self.v(z) for z in self.F})


def identity_character(X, M, name, v, A) -> MultiplicativeSpan:
    """``u = id`` on ``X_1``, extended to every label the ambient product makes."""
    return MultiplicativeSpan(name, tuple(X.levels[1]), dict(M.product[1]), M.eta(X, 1),
                              lambda f: f, v, A, lift=lambda f: (f,))


@dataclass
class InversionReport:
    checks: list
    certificates: list
    inverse: list

    @property
    def passed(self) -> bool:
        return all(self.checks) and all(self.certificates)

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": [c.to_json() for c in self.checks],
                "certificates": [{"lhs": c.lhs, "rhs": c.rhs, "valid": c.valid,
                                  "counterexample": c.counterexample} for c in self.certificates],
                "inverse": [{"name": s.name, "tokens": len(s)} for s in self.inverse]}


def check_hypotheses(X: TruncatedSimplicialSet, M: MonoidalStructure,
                     phi: MultiplicativeSpan) -> list:
    """Monoidality, the CULF and unit squares, and contraction of degenerates."""
    A = phi.A
    mul1 = M.product[1]
    eta1 = M.eta(X, 1)
    results = []
    bad = []
    for (x, y), z in phi.product.items():
        ux, uy = phi.u(x), phi.u(y)
        if M.mul1(ux, uy) != phi.u(z):
            bad.append({"leg": "u", "pair": [x, y]})
        if A.mul(phi.v(x), phi.v(y)) != phi.v(z):
            bad.append({"leg": "v", "pair": [x, y]})
    results.append(CheckResult("monoidal legs", not bad, bad))
    culf = pullback_square(
        "u CULF", list(phi.product),
        lambda p: phi.product[p], lambda p: (phi.u(p[0]), phi.u(p[1])),
        phi.F, list(mul1), phi.u, lambda ab: M.mul1(*ab))
    results.append(culf)
    unit_fibre = [z for z in phi.F if phi.u(z) == eta1]
    ok = unit_fibre == [phi.unit] and phi.v(phi.unit) == A.unit
    results.append(CheckResult("unit square", ok, [] if ok else [
        {"fibre over unit": unit_fibre, "v(unit)": phi.v(phi.unit)}]))
    bad = []
    for x in X.levels[0]:
        fib = [z for z in phi.F if phi.u(z) == X.s(0, 0, x)]
        if len(fib) != 1:
            bad.append({"square": "pullback along s_0", "vertex": x, "fibre": fib})
        elif phi.v(fib[0]) != A.unit:
            bad.append({"square": "v s_F = eta_A", "vertex": x, "s_F": fib[0],
                        "value": phi.v(fib[0])})
    results.append(CheckResult("contracts degenerates", not bad, bad))
    return results


def _factor_closure(X, columns) -> set:
    """Level-1 labels having some label of ``columns`` among their iterated factors."""
    out = set(columns)
    changed = bool(out)
    while changed:
        changed = False
        for s in X.levels[2]:
            f = X.face[2, 1][s]
            if f not in out and (X.face[2, 2][s] in out or X.face[2, 0][s] in out):
                out.add(f)
                changed = True
    return out


def check_and_invert_multiplicative(X: TruncatedSimplicialSet, M: MonoidalStructure,
                                    phi: MultiplicativeSpan, L: int) -> InversionReport:
    """Hypotheses first (raising :class:`HypothesisFailed`), then the proof chain.

    Certificates: ``φ∘Id' ≅ φ`` (through ``φ∘S_0 ≅ φ∘ω``), distribution of
    ``φ∘-`` over convolution on ``S_0, S_1, S_2``, and the telescoping
    ``φ * (φ∘S_n) ≅ φ∘(S_n + S_{n+1})`` for ``n <= L``.
    """
    checks = check_hypotheses(X, M, phi)
    contracts = checks[3]
    if contracts and not checks[2]:
        raise AssertionError("contraction holds but unitality fails")
    for c in checks:
        if not c:
            raise HypothesisFailed(f"{phi.name}: {c.name} fails", witness=c.witnesses[:5])
    A = phi.A
    P = phi.span()
    # With only a finite F, fibres over labels outside X_1 are unknown; the
    # columns that need them (directly or through a factor) are left out.
    known = set(X.levels[1])
    escaped = set()

    def after(S):
        if phi.lift is None:
            escaped.update(S.left[t] for t in S.middle if S.right[t] not in known)
        out = compose_spans(S, P, lift=phi.fibre, right_of=phi.v)
        return FiniteSpan(f"{phi.name}∘{S.name}", out.middle, out.left, out.right)

    pairs = [(after(canonical_span(X, M, "S", 0)), after(canonical_span(X, M, "omega"))),
             (after(canonical_span(X, M, "Id'")), P)]
    basic = [canonical_span(X, M, "S", k) for k in range(min(2, X.N) + 1)]
    for a in basic:
        for b in basic:
            pairs.append((after(convolve_spans(X, a, b, M.mul1)),
                          convolve_spans(X, after(a), after(b), A.mul)))
    inverse = [after(canonical_span(X, M, "S", k)) for k in range(min(L + 1, X.N) + 1)]
    for k in range(min(L, X.N - 1) + 1):
        pairs.append((convolve_spans(X, P, inverse[k], A.mul),
                      after(span_sum(canonical_span(X, M, "S", k),
                                     canonical_span(X, M, "S", k + 1)))))
    unsafe = _factor_closure(X, escaped)
    if unsafe:
        safe = [f for f in X.levels[1] if f not in unsafe]
        pairs = [(l.restrict(safe), r.restrict(safe)) for l, r in pairs]
    certs = [check_span_iso(l, r) for l, r in pairs]
    if unsafe:
        for c in certs:
            c.note = (c.note + "; " if c.note else "") + f"{len(unsafe)} columns outside F omitted"
    return InversionReport(checks, certs, inverse)


def character_span(X, M, name, value, A) -> MultiplicativeSpan:
    """A character given on labels as a single target label, as a span with ``u = id``."""
    return identity_character(X, M, name, value, A)


def principal_word_span(X: TruncatedSimplicialSet, max_word: int = 2) -> tuple:
    """A multiplicative span that is not CULF, on the free closure of ``X``.

    ``F`` is the free monoid on 2-simplices; a letter ``σ`` goes to the word
    of its principal edges ``[d_2 σ][d_0 σ]`` and ``v`` is constant.  Returns
    ``(Y, M, phi)``.
    """
    from .bialgebra import scalars
    from .builders.nerve import free_monoidal_closure

    Y, MY = free_monoidal_closure(X, max_word)

    def u(w):
        out = "".join(f"[{X.d(2, 2, s[1:-1])}][{X.d(2, 0, s[1:-1])}]"
                      for s in _ambient.atoms("word-concatenation", w))
        return out or "[]"

    phi = MultiplicativeSpan("principal-word", tuple(Y.levels[2]), dict(MY.product[2]),
                             "[]", u, lambda w: "1", scalars())
    return Y, MY, phi
