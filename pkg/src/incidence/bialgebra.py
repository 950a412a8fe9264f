"""Incidence bialgebras at the level of cardinalities.

Linear maps out of the bialgebra are :class:`QMatrix` objects whose columns
are level-1 classes and whose rows are labels of a target algebra.  The
convolution algebra, the endomorphisms ``S_n``, ``Id'``, ``e``, ``omega``,
the weak antipode and the Moebius functional are all built from the
comultiplication matrix and a multiplication on labels.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from . import ambient
from .errors import AxiomViolation, ClosureEscape, ExactnessNotCertified, \
    HypothesisFailed, UndefinedProduct
from .linalg import QMatrix, WeightedBasis, span_to_matrix
from .simplicial import (CheckResult, MonoidalStructure, TruncatedSimplicialSet,
                         degenerate_simplices, long_edge, nondegenerate_simplices)

log = logging.getLogger(__name__)

ConvolutionElement = QMatrix


# ---------------------------------------------------------------------------
# target algebras

class Algebra:
    """Monoid algebra on string labels: ``mul`` returns a single label."""

    def __init__(self, name: str, unit: str, op: Callable, basis: Iterable = ()):
        self.name = name
        self.unit = unit
        self._op = op
        self.basis = tuple(basis) or (unit,)

    def mul(self, x, y) -> str:
        z = self._op(x, y)
        if z is None:
            raise UndefinedProduct(f"product {x!r}·{y!r} undefined in {self.name}",
                                   witness={"algebra": self.name, "pair": [x, y]})
        return z

    def __repr__(self):
        return f"Algebra({self.name!r})"


def scalars() -> Algebra:
    return Algebra("Q", "1", lambda x, y: "1", ("1",))


def truncated_polynomial(degree: int, var: str = "t") -> Algebra:
    """``Q[t]/(t^{degree+1})`` viewed as the monoid ``{t^0..t^degree}``;
    products past the truncation are reported as escapes."""
    def power(x):
        return int(x.split("^")[1])

    def op(x, y):
        k = power(x) + power(y)
        if k > degree:
            raise ClosureEscape(f"{x}·{y} exceeds degree {degree}",
                                witness={"algebra": f"{var}-poly", "pair": [x, y]})
        return f"{var}^{k}"

    return Algebra(f"Q[{var}]/({var}^{degree + 1})", f"{var}^0", op,
                   [f"{var}^{k}" for k in range(degree + 1)])


def finite_monoid(name: str, unit: str, table: Mapping) -> Algebra:
    """Monoid algebra of a finite monoid given by ``{(a, b): ab}``."""
    elements = sorted({unit} | {x for ab in table for x in ab} | set(table.values()))
    return Algebra(name, unit, lambda x, y: table.get((x, y)), elements)


# ---------------------------------------------------------------------------
# the bialgebra

@dataclass
class IncidenceBialgebra:
    X: TruncatedSimplicialSet
    M: MonoidalStructure | None
    basis: WeightedBasis
    delta: QMatrix
    counit: QMatrix
    degenerate: frozenset
    nondegenerate: tuple
    checks: list = field(default_factory=list)

    @property
    def ids(self) -> tuple:
        return self.basis.ids

    @property
    def unit(self) -> str:
        if self.M is None:
            raise ClosureEscape("no monoidal structure: the bialgebra has no unit")
        return self.M.eta(self.X, 1)

    @cached_property
    def terms(self) -> dict:
        """``f -> [((a, b), c), ...]`` in deterministic order."""
        out = {f: [] for f in self.ids}
        for (ab, f), c in self.delta.items():
            out[f].append((ab, c))
        return out

    @cached_property
    def down(self) -> dict:
        """Classes reachable from ``f`` by repeatedly taking tensor factors."""
        out = {}
        for f in self.ids:
            seen, stack = {f}, [f]
            while stack:
                for (a, b), _ in self.terms[stack.pop()]:
                    for x in (a, b):
                        if x not in seen:
                            seen.add(x)
                            stack.append(x)
            out[f] = frozenset(seen)
        return out

    def mul1(self, a, b):
        if self.M is None:
            raise ClosureEscape("no monoidal structure")
        return self.M.mul1(a, b)

    @cached_property
    def algebra(self) -> Algebra:
        """The bialgebra itself as convolution target."""
        if self.M is None:
            raise ClosureEscape("bialgebra has no monoidal part")
        return Algebra("B", self.unit, self.mul1, self.ids)

    def epsilon(self, f) -> Fraction:
        return self.counit["1", f]


def build_bialgebra(X: TruncatedSimplicialSet, M: MonoidalStructure | None = None,
                    check: bool = True) -> IncidenceBialgebra:
    """Comultiplication from ``X_1 <- X_2 -> X_1 x X_1``, counit from ``s_0``.

    With ``check`` the coalgebra axioms, and the bialgebra axioms when ``M`` is
    given, are verified exactly; a failure raises :class:`AxiomViolation`.
    """
    if X.N < 2:
        raise ValueError("building the bialgebra needs levels 0..2")
    aut1 = {f: X.aut(1, f) for f in X.levels[1]}
    ids = tuple(X.levels[1])
    basis = WeightedBasis(ids, aut1)
    p = {s: X.d(2, 1, s) for s in X.levels[2]}
    q = {s: (X.d(2, 2, s), X.d(2, 0, s)) for s in X.levels[2]}
    delta = span_to_matrix(p, q, {s: X.aut(2, s) for s in X.levels[2]}, aut1, cols=ids)
    s0 = {x: X.s(0, 0, x) for x in X.levels[0]}
    counit = span_to_matrix({x: s0[x] for x in X.levels[0]}, {x: "1" for x in X.levels[0]},
                            {x: X.aut(0, x) for x in X.levels[0]}, aut1, rows=("1",), cols=ids)
    degen = degenerate_simplices(X, 1)
    B = IncidenceBialgebra(X, M, basis, delta, counit, frozenset(degen),
                           nondegenerate_simplices(X, 1))
    if check:
        results = [check_coassociative(B), check_counit(B)]
        if M is not None:
            results.append(check_compatibility(B))
        B.checks = results
        for r in results:
            if not r:
                raise AxiomViolation(f"{r.name} fails", witness=r.witnesses[:5])
    return B


def _delta_of(B, f) -> dict:
    return {ab: c for ab, c in B.terms[f]}


def check_coassociative(B: IncidenceBialgebra) -> CheckResult:
    bad = []
    for f in B.ids:
        left, right = {}, {}
        for (a, z), c in B.terms[f]:
            for (x, y), d in B.terms[a]:
                left[x, y, z] = left.get((x, y, z), 0) + c * d
        for (x, b), c in B.terms[f]:
            for (y, z), d in B.terms[b]:
                right[x, y, z] = right.get((x, y, z), 0) + c * d
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        if left != right:
            diff = sorted(set(left) ^ set(right) | {k for k in left if left[k] != right.get(k)})
            bad.append({"column": f, "entry": list(diff[0]),
                        "left": str(left.get(diff[0], 0)), "right": str(right.get(diff[0], 0))})
    return CheckResult("coassociativity", not bad, bad)


def check_counit(B: IncidenceBialgebra) -> CheckResult:
    bad = []
    for f in B.ids:
        left, right = {}, {}
        for (a, b), c in B.terms[f]:
            left[b] = left.get(b, 0) + c * B.epsilon(a)
            right[a] = right.get(a, 0) + c * B.epsilon(b)
        for side, got in (("left", left), ("right", right)):
            got = {k: v for k, v in got.items() if v}
            if got != {f: 1}:
                bad.append({"column": f, "side": side,
                            "got": {k: str(v) for k, v in got.items()}})
    return CheckResult("counit", not bad, bad)


def check_compatibility(B: IncidenceBialgebra) -> CheckResult:
    """``Δ(ab) = Δ(a)Δ(b)``, ``ε(ab) = ε(a)ε(b)`` on the level-1 table, and
    the unit is group-like."""
    bad = []
    eta = B.unit
    if _delta_of(B, eta) != {(eta, eta): 1} or B.epsilon(eta) != 1:
        bad.append({"kind": "unit", "class": eta})
    for (a, b), ab in B.M.product[1].items():
        want = _delta_of(B, ab)
        got: dict = {}
        for (x1, y1), c1 in B.terms[a]:
            for (x2, y2), c2 in B.terms[b]:
                x, y = B.mul1(x1, x2), B.mul1(y1, y2)
                if x is None or y is None:
                    raise ClosureEscape("product needed by the compatibility check escapes",
                                        witness={"pairs": [[x1, x2], [y1, y2]]})
                got[x, y] = got.get((x, y), 0) + c1 * c2
        got = {k: v for k, v in got.items() if v}
        if got != want:
            bad.append({"kind": "delta", "pair": [a, b], "product": ab})
        if B.epsilon(ab) != B.epsilon(a) * B.epsilon(b):
            bad.append({"kind": "counit", "pair": [a, b], "product": ab})
    return CheckResult("bialgebra compatibility", not bad, bad)


# ---------------------------------------------------------------------------
# convolution

def convolve(B: IncidenceBialgebra, F: QMatrix, G: QMatrix, A: Algebra) -> QMatrix:
    """``F * G = μ_A ∘ (F ⊗ G) ∘ Δ``."""
    columns = {}
    for f in B.ids:
        out: dict = {}
        for (a, b), c in B.terms[f]:
            fa, gb = F.columns.get(a), G.columns.get(b)
            if not fa or not gb:
                continue
            for x, u in fa.items():
                for y, v in gb.items():
                    z = A.mul(x, y)
                    out[z] = out.get(z, 0) + c * u * v
        columns[f] = out
    return QMatrix.from_columns(B.ids, columns, A.basis)


def neutral(B: IncidenceBialgebra, A: Algebra) -> QMatrix:
    """``e = η_A ∘ ε``."""
    cols = {f: {A.unit: B.epsilon(f)} for f in B.ids}
    return QMatrix.from_columns(B.ids, cols, A.basis)


def structural_endomorphism(B: IncidenceBialgebra, kind: str, n: int | None = None) -> QMatrix:
    """One of ``S_n``, ``Id'``, ``e``, ``omega``, ``Id`` as a matrix into ``B``."""
    A = B.algebra
    nd = set(B.nondegenerate)
    if kind == "S":
        if n is None or n < 0:
            raise ValueError("S needs n >= 0")
        return antipode_powers(B, n)[n]
    if kind == "e":
        return neutral(B, A)
    if kind == "Id'":
        cols = {f: {f: 1} if f in nd else {A.unit: 1} for f in B.ids}
    elif kind == "omega":
        cols = {f: {f: 1} for f in B.ids if f not in nd}
    elif kind == "Id":
        cols = {f: {f: 1} for f in B.ids}
    else:
        raise ValueError(f"unknown endomorphism {kind!r}")
    return QMatrix.from_columns(B.ids, cols, A.basis)


def _s1(B):
    return QMatrix.from_columns(B.ids, {f: {f: 1} for f in B.nondegenerate}, B.ids)


def antipode_powers(B: IncidenceBialgebra, n: int) -> list:
    """``[S_0, ..., S_n]`` with ``S_k = S_1^{*k}``."""
    A = B.algebra
    out = [neutral(B, A), _s1(B)]
    while len(out) <= n:
        out.append(convolve(B, out[1], out[-1], A))
    return out[: n + 1]


@dataclass
class WeakAntipode:
    """``S = Σ (-1)^n S_n`` with per-column certificates.

    A column ``f`` is ``exact`` once some computed ``S_n`` vanishes on every
    class reachable from ``f`` through tensor factors: all higher powers then
    vanish on ``f`` as well.
    """

    matrix: QMatrix
    powers: list
    lengths: dict
    certificates: dict

    @property
    def max_length(self) -> int:
        return max(self.lengths.values(), default=0)

    @property
    def uncertified(self) -> list:
        return [f for f, c in self.certificates.items() if c != "exact"]

    def even(self) -> QMatrix:
        return _alternating(self.powers, 0)

    def odd(self) -> QMatrix:
        return _alternating(self.powers, 1)


def _alternating(powers, parity):
    out = QMatrix.zero(powers[0].rows, powers[0].cols)
    for k in range(parity, len(powers), 2):
        out = out + powers[k]
    return out


def weak_antipode(B: IncidenceBialgebra, max_power: int = 64,
                  strict: bool = True) -> WeakAntipode:
    A = B.algebra
    powers = [neutral(B, A), _s1(B)]
    while not powers[-1].is_zero() and len(powers) <= max_power:
        powers.append(convolve(B, powers[1], powers[-1], A))
    lengths, certs = {}, {}
    for f in B.ids:
        lengths[f] = max(k for k, P in enumerate(powers) if k == 0 or f in P.columns)
        closure = B.down[f]
        done = any(not any(g in P.columns for g in closure) for P in powers[1:])
        certs[f] = "exact" if done else "uncertified"
    S = QMatrix.zero(A.basis, B.ids)
    for k, P in enumerate(powers):
        S = S + (P if k % 2 == 0 else -P)
    W = WeakAntipode(S, powers, lengths, certs)
    if strict and W.uncertified:
        raise ExactnessNotCertified(
            f"{len(W.uncertified)} columns not certified within {max_power} powers",
            witness=W.uncertified[:20])
    return W


def verify_weak_antipode(B: IncidenceBialgebra, W: WeakAntipode | None = None) -> CheckResult:
    """``Id' * S = e = S * Id'`` exactly; in the connected case also ``Id * S = e``."""
    W = W or weak_antipode(B)
    A = B.algebra
    idp = structural_endomorphism(B, "Id'")
    e = neutral(B, A)
    cols = [f for f in B.ids if W.certificates[f] == "exact"]
    info, bad = {}, []
    eqs = [("Id' * S", convolve(B, idp, W.matrix, A)), ("S * Id'", convolve(B, W.matrix, idp, A))]
    connected = len(B.degenerate) == 1
    if connected:
        eqs.append(("Id * S", convolve(B, structural_endomorphism(B, "Id"), W.matrix, A)))
    for name, lhs in eqs:
        diff = lhs.restrict_columns(cols).difference(e.restrict_columns(cols))
        info[name] = not diff
        bad.extend({"identity": f"{name} = e", "row": r, "column": c,
                    "got": str(x), "expected": str(y)} for r, c, x, y in diff[:5])
    info["connected"] = connected
    info["columns"] = len(cols)
    return CheckResult("weak antipode", not bad, bad, info)


# ---------------------------------------------------------------------------
# Moebius

@dataclass
class MobiusData:
    zeta: QMatrix
    phis: list
    mu_bar: QMatrix
    check: CheckResult

    def value(self, f) -> Fraction:
        return self.mu_bar["1", f]


def apply_functional(values: Callable, M: QMatrix, cols: Iterable) -> QMatrix:
    """Compose a functional given on labels with a matrix."""
    out = {}
    for c in cols:
        tot = sum((v * values(r) for r, v in M.columns.get(c, {}).items()), Fraction(0))
        out[c] = {"1": tot}
    return QMatrix.from_columns(tuple(cols), out, ("1",))


def phi_from_simplices(B: IncidenceBialgebra, n: int) -> QMatrix:
    """``Φ_n(f)``: aut-weighted count of nondegenerate ``n``-classes with long edge ``f``."""
    X = B.X
    if n == 0:
        return B.counit
    cols: dict = {}
    for s in nondegenerate_simplices(X, n):
        f = long_edge(X, n, s)
        col = cols.setdefault(f, {"1": 0})
        col["1"] += Fraction(X.aut(1, f), X.aut(n, s))
    return QMatrix.from_columns(B.ids, cols, ("1",))


def mobius_functor(B: IncidenceBialgebra, W: WeakAntipode | None = None) -> MobiusData:
    """``ζ``, ``Φ_n = ζ∘S_n`` and ``μ̄ = ζ∘S``; checks ``ζ*μ̄ = ε = μ̄*ζ``."""
    W = W or weak_antipode(B)
    one = lambda r: 1  # noqa: E731
    Q = scalars()
    zeta = QMatrix.from_columns(B.ids, {f: {"1": 1} for f in B.ids}, ("1",))
    phis = [apply_functional(one, P, B.ids) for P in W.powers]
    mu = apply_functional(one, W.matrix, B.ids)
    info, bad = {}, []
    for name, lhs in (("zeta * mu", convolve(B, zeta, mu, Q)),
                      ("mu * zeta", convolve(B, mu, zeta, Q))):
        diff = lhs.difference(B.counit)
        info[name] = not diff
        bad.extend({"identity": f"{name} = epsilon", "column": c, "got": str(x),
                    "expected": str(y)} for _, c, x, y in diff[:5])
    for n in range(1, min(B.X.N, len(phis) - 1) + 1):
        direct = phi_from_simplices(B, n)
        ok = direct == phis[n]
        info[f"Phi_{n} from simplices"] = ok
        if not ok:
            bad.append({"identity": f"Phi_{n} = zeta∘S_{n}",
                        "diff": [[r, c, str(x), str(y)] for r, c, x, y in
                                 direct.difference(phis[n])[:5]]})
    return MobiusData(zeta, phis, mu, CheckResult("moebius inversion", not bad, bad, info))


# ---------------------------------------------------------------------------
# connected quotient

@dataclass
class ConnectedQuotient:
    basis: tuple
    unit: str
    pi: QMatrix
    S_H: QMatrix
    algebra: Algebra
    check: CheckResult
    project: Callable


def quotient_projection(B: IncidenceBialgebra) -> Callable:
    """Label map ``B -> H``: degenerate factors of a product are dropped.

    With a named ambient product the factorisation into atoms is read off
    the label; otherwise the congruence generated by ``g ~ unit`` is closed
    over the level-1 product table and labels outside the table escape.
    """
    eta, degen = B.unit, B.degenerate
    if B.M.ambient is not None:
        name = B.M.ambient
        return lambda x: eta if x in degen else ambient.strip(name, x, degen.__contains__)
    parent = {f: f for f in B.ids}
    order = {f: k for k, f in enumerate(B.ids)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x == y:
            return False
        if order[y] < order[x]:
            x, y = y, x
        parent[y] = x
        return True

    for g in degen:
        union(eta, g)
    table = B.M.product[1]
    changed = True
    while changed:
        changed, seen = False, {}
        for (a, b), c in table.items():
            key = (find(a), find(b))
            if key in seen:
                changed |= union(seen[key], c)
            else:
                seen[key] = c

    def proj(x):
        if x not in parent:
            raise ClosureEscape(f"label {x!r} lies outside the truncated carrier",
                                witness={"label": x})
        return find(x)

    return proj


def connected_quotient(B: IncidenceBialgebra, W: WeakAntipode | None = None,
                       max_depth: int = 256) -> ConnectedQuotient:
    """``H = B / J`` where ``J`` is generated by ``g - unit`` for group-likes ``g``.

    ``S_H`` comes from ``S_H = e - S_H * S_1`` computed in ``H``; the lift
    property ``π∘S = S_H∘π`` is checked exactly.
    """
    W = W or weak_antipode(B)
    eta = B.unit
    proj = quotient_projection(B)
    pre: dict = {}
    for f in B.ids:
        pre.setdefault(proj(f), f)
    basis = (eta,) + tuple(h for h in pre if h != eta)
    H = Algebra("H", eta, lambda x, y: proj(B.algebra.mul(x, y)), basis)
    pi = QMatrix.from_columns(B.ids, {f: {proj(f): 1} for f in B.ids}, basis)

    def delta_h(h):
        out: dict = {}
        for (a, b), c in B.terms[pre[h]]:
            k = (proj(a), proj(b))
            out[k] = out.get(k, 0) + c
        return out

    memo: dict = {}
    active: set = set()

    def s_h(h) -> dict:
        if h in memo:
            return memo[h]
        if h in active or len(active) > max_depth:
            raise ExactnessNotCertified("connected recursion does not terminate",
                                        witness={"class": h, "stack": sorted(active)})
        active.add(h)
        out: dict = {}
        if h == eta:
            out[eta] = Fraction(1)
        else:
            for (a, b), c in delta_h(h).items():
                if b == eta:
                    continue
                for x, v in s_h(a).items():
                    z = H.mul(x, b)
                    out[z] = out.get(z, 0) - c * v
        active.discard(h)
        memo[h] = {k: v for k, v in out.items() if v}
        return memo[h]

    S_H = QMatrix.from_columns(basis, {h: s_h(h) for h in basis}, basis)
    lhs_cols = {}
    for f in B.ids:
        col: dict = {}
        for r, v in W.matrix.columns.get(f, {}).items():
            col[proj(r)] = col.get(proj(r), 0) + v
        lhs_cols[f] = col
    lhs = QMatrix.from_columns(B.ids, lhs_cols, basis)
    rhs = QMatrix.from_columns(B.ids, {f: s_h(proj(f)) for f in B.ids}, basis)
    diff = lhs.difference(rhs)
    bad = [{"identity": "pi∘S = S_H∘pi", "row": r, "column": c, "lhs": str(x), "rhs": str(y)}
           for r, c, x, y in diff[:10]]
    info = {"basis": len(basis), "columns": len(B.ids)}
    return ConnectedQuotient(basis, eta, pi, S_H, H,
                             CheckResult("lift", not bad, bad, info), proj)


# ---------------------------------------------------------------------------
# multiplicative characters

@dataclass
class Character:
    """A linear map ``B -> A`` given on labels (including ambient products)."""

    name: str
    target: Algebra
    value: Callable  # label -> {target label: coefficient}

    def matrix(self, cols: Iterable) -> QMatrix:
        cols = tuple(cols)
        return QMatrix.from_columns(cols, {f: self.value(f) for f in cols}, self.target.basis)

    def compose(self, M: QMatrix) -> QMatrix:
        out = {}
        for c in M.cols:
            col: dict = {}
            for r, v in M.columns.get(c, {}).items():
                for z, w in self.value(r).items():
                    col[z] = col.get(z, 0) + v * w
            out[c] = col
        return QMatrix.from_columns(M.cols, out, self.target.basis)


def zeta_character() -> Character:
    return Character("zeta", scalars(), lambda f: {"1": 1})


def defect_character(degree: int) -> Character:
    """Monotone surjection ``(c_1..c_n) -> t^(Σc - n)``."""
    A = truncated_polynomial(degree)

    def value(f):
        parts = [int(p) for p in f.strip("()").split(",") if p]
        return {f"t^{sum(parts) - len(parts)}": 1}

    return Character("defect", A, value)


def quotient_character(Q: ConnectedQuotient) -> Character:
    return Character("pi", Q.algebra, lambda f: {Q.project(f): 1})


def invert_multiplicative(B: IncidenceBialgebra, phi: Character,
                          W: WeakAntipode | None = None) -> tuple:
    """Check the hypotheses on ``phi`` and return ``(phi∘S, CheckResult)``.

    Hypotheses: ``phi`` is multiplicative on every defined product and sends
    group-like classes (degenerates) to the unit of ``A``, so it kills ``J``.
    A violated hypothesis raises :class:`HypothesisFailed`.
    """
    W = W or weak_antipode(B)
    A = phi.target
    unit = {A.unit: 1}
    for g in sorted(B.degenerate):
        if _clean(phi.value(g)) != unit:
            raise HypothesisFailed(f"{phi.name} does not send the group-like {g!r} to the unit",
                                   witness={"class": g, "value": _str(phi.value(g))})
    for (a, b), ab in B.M.product[1].items():
        lhs = _clean(phi.value(ab))
        rhs: dict = {}
        for x, u in phi.value(a).items():
            for y, v in phi.value(b).items():
                z = A.mul(x, y)
                rhs[z] = rhs.get(z, 0) + u * v
        if lhs != _clean(rhs):
            raise HypothesisFailed(f"{phi.name} is not multiplicative on ({a}, {b})",
                                   witness={"pair": [a, b], "product": ab,
                                            "lhs": _str(lhs), "rhs": _str(rhs)})
    P = phi.matrix(B.ids)
    inv = phi.compose(W.matrix)
    e = neutral(B, A)
    cols = [f for f in B.ids if W.certificates[f] == "exact"]
    info, bad = {}, []
    for name, lhs in (("phi * phiS", convolve(B, P, inv, A)),
                      ("phiS * phi", convolve(B, inv, P, A))):
        diff = lhs.restrict_columns(cols).difference(e.restrict_columns(cols))
        info[name] = not diff
        bad.extend({"identity": f"{name} = eta epsilon", "row": r, "column": c,
                    "got": str(x), "expected": str(y)} for r, c, x, y in diff[:5])
    # the same inverse assembled from (phi∘S_1)^{*n}
    p1 = phi.compose(W.powers[1])
    alt = QMatrix.zero(A.basis, B.ids)
    power = neutral(B, A)
    for k in range(len(W.powers)):
        alt = alt + (power if k % 2 == 0 else -power)
        power = convolve(B, p1, power, A)
    info["phi∘S = Σ(-1)^n (phi∘S_1)^*n"] = alt == inv
    if alt != inv:
        bad.append({"identity": "distribution", "diff": len(alt.difference(inv))})
    return inv, CheckResult(f"invert {phi.name}", not bad, bad, info)


def _clean(d):
    return {k: Fraction(v) for k, v in d.items() if v}


def _str(d):
    return {k: str(v) for k, v in d.items()}
