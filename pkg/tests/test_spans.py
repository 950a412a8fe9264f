import pytest
from hypothesis import given, settings, strategies as st

from incidence.bialgebra import (build_bialgebra, connected_quotient, convolve, mobius_functor,
                                 scalars, truncated_polynomial, weak_antipode)
from incidence.builders import free_monoidal_closure
from incidence.errors import ClosureEscape, HypothesisFailed
from incidence.simplicial import MonoidalStructure, nondegenerate_simplices
from incidence.spans import (POINT, FiniteSpan, MultiplicativeSpan, SpanIsoCertificate,
                             canonical_span, certificate_from_map, character_span,
                             check_and_invert_multiplicative, check_hypotheses, check_span_iso,
                             compose_spans, convolve_spans, identity_character,
                             principal_word_span, replay, span_sum, verify_identity)

from conftest import bialgebra_of, chain, closed_poset, surjections


def defect(f):
    parts = [int(p) for p in f[1:-1].split(",") if p]
    return f"t^{sum(parts) - len(parts)}"


def after_zeta(S):
    # ζ is the span X_1 = X_1 -> 1, defined on every label
    return compose_spans(S, FiniteSpan("zeta", (), {}, {}), lift=lambda v: (v,),
                         right_of=lambda t: POINT)


# ---------------------------------------------------------------------------
# canonical spans

def test_s1_is_inclusion_of_nondegenerates():
    X, M = surjections(4)
    S1 = canonical_span(X, M, "S", 1)
    assert set(S1.middle) == set(nondegenerate_simplices(X, 1))
    assert all(S1.left[t] == S1.right[t] == t for t in S1.middle)


def test_neutral_span():
    X, M = surjections(4)
    e = canonical_span(X, M, "e")
    assert set(e.right.values()) == {"()"}
    assert {e.left[x] for x in e.middle} == {X.s(0, 0, x) for x in X.levels[0]}
    S0 = canonical_span(X, M, "S", 0)
    assert (S0.middle, dict(S0.left), dict(S0.right)) == (e.middle, dict(e.left), dict(e.right))


def test_spans_need_monoidal_structure():
    with pytest.raises(ClosureEscape):
        canonical_span(chain(3, 3), None, "S", 1)
    with pytest.raises(ValueError):
        canonical_span(chain(3, 3), None, "Phi", 4)


def test_zeta_after_s_is_phi():
    X, M = surjections(4, 4)
    for n in range(5):
        composite = after_zeta(canonical_span(X, M, "S", n))
        assert check_span_iso(composite, canonical_span(X, M, "Phi", n))


def test_s1_squared_is_nondegenerate_two_simplices():
    X, M = surjections(3)
    S1 = canonical_span(X, M, "S", 1)
    sq = convolve_spans(X, S1, S1, M.mul1)
    assert len(sq) == len(nondegenerate_simplices(X, 2))
    assert check_span_iso(sq, canonical_span(X, M, "S", 2))


def test_product_escape_is_reported():
    X, M = closed_poset("chain", 3)[:2]
    bare = MonoidalStructure(M.unit, M.product)
    S1 = canonical_span(X, bare, "S", 1)
    with pytest.raises(ClosureEscape) as exc:
        convolve_spans(X, S1, S1, bare.mul1)
    assert "pair" in exc.value.witness


# ---------------------------------------------------------------------------
# certificates

def test_self_certificate():
    X, M = surjections(4)
    S = canonical_span(X, M, "S", 2)
    cert = check_span_iso(S, S)
    assert cert and all(a == b for a, b in cert.pairs)
    assert replay(cert, S, S)


def test_different_supports_give_counterexample():
    X, M = surjections(4)
    cert = check_span_iso(canonical_span(X, M, "e"), canonical_span(X, M, "S", 1))
    assert not cert
    assert {"left", "right", "lhs_size", "rhs_size"} <= set(cert.counterexample)
    assert cert.to_json()["verdict"] == "fail"


def test_lemma_instance_certificate():
    X, M = surjections(4)
    lhs = convolve_spans(X, canonical_span(X, M, "Id'"), canonical_span(X, M, "S", 1), M.mul1)
    rhs = span_sum(canonical_span(X, M, "S", 1), canonical_span(X, M, "S", 2))
    cert = check_span_iso(lhs, rhs)
    assert cert
    doc = cert.to_json()
    assert doc["verdict"] == "iso" and doc["fibres"] > 0 and len(doc["pairs"]) == len(lhs)


def test_tampered_certificate_fails_replay():
    X, M = surjections(4)
    S = canonical_span(X, M, "S", 2)
    cert = check_span_iso(S, S)
    swapped = list(cert.pairs)
    swapped[0], swapped[-1] = (swapped[0][0], swapped[-1][1]), (swapped[-1][0], swapped[0][1])
    bad = SpanIsoCertificate(S.name, S.name, True, swapped)
    assert not replay(bad, S, S)
    assert not replay(SpanIsoCertificate(S.name, S.name, True, cert.pairs[1:]), S, S)


def test_certificate_from_bad_map():
    X, M = surjections(4)
    S = canonical_span(X, M, "S", 1)
    cert = certificate_from_map(S, S, lambda t: S.middle[0])
    assert not cert and cert.counterexample


# ---------------------------------------------------------------------------
# named identities

def test_lemma_rec():
    X, M = surjections(4, 4)
    for n in (1, 2):
        r = verify_identity(X, M, "lemma-rec", n)
        assert r.passed and len(r.certificates) == 4
        assert all(c.note for c in r.certificates[2:])


def test_theorem_on_short_columns():
    X, M = surjections(5, 4)
    r = verify_identity(X, M, "theorem", 3)
    assert r.passed
    lengths = weak_antipode(build_bialgebra(X, M)).lengths
    assert set(r.exact_columns) == {f for f in X.levels[1] if lengths[f] <= 3}
    assert r.boundary["term"] == "S_4" and r.boundary["tokens"] > 0


def test_mobius_identity_on_chain_closure():
    X, M = closed_poset("chain", 3)[:2]
    r = verify_identity(X, M, "mobius", 2)
    assert r.passed
    assert r.boundary["tokens"] == 0


def test_truncation_boundary_is_not_ignored():
    X, M = surjections(4, 3)
    with pytest.raises(ValueError):
        verify_identity(X, M, "theorem", 3)
    with pytest.raises(ValueError):
        verify_identity(X, M, "no-such-identity", 1)


def test_identity_report_json():
    X, M = surjections(4, 4)
    doc = verify_identity(X, M, "lemma-idprime", 1).to_json()
    assert doc["passed"] and doc["certificates"][0]["valid"]


# ---------------------------------------------------------------------------
# general inversion

def _characters():
    X, M = surjections(4, 4)
    B = build_bialgebra(X, M)
    W = weak_antipode(B)
    Q = connected_quotient(B, W)
    return X, M, B, W, [
        identity_character(X, M, "zeta", lambda f: "1", scalars()),
        identity_character(X, M, "defect", defect, truncated_polynomial(4)),
        character_span(X, M, "pi", Q.project, Q.algebra),
    ]


def test_inversion_for_characters():
    X, M, B, W, phis = _characters()
    for phi in phis:
        report = check_and_invert_multiplicative(X, M, phi, 3)
        assert report.passed, [c.counterexample for c in report.certificates if not c]
        assert [c.name for c in report.checks] == ["monoidal legs", "u CULF", "unit square",
                                                  "contracts degenerates"]


def test_zeta_inverse_spans_give_mobius():
    X, M, B, W, phis = _characters()
    report = check_and_invert_multiplicative(X, M, phis[0], 3)
    mu = mobius_functor(B, W).mu_bar
    for f in B.ids:
        if W.lengths[f] <= 3:
            total = 0
            for k, S in enumerate(report.inverse[:4]):
                total += (-1) ** k * sum(1 for t in S.middle if S.left[t] == f)
            assert total == mu["1", f], f


def test_principal_word_span_is_not_culf():
    Y, MY, phi = principal_word_span(chain(3, 3))
    checks = check_hypotheses(Y, MY, phi)
    culf = checks[1]
    assert not culf and culf.witnesses[0]["kind"] == "fibre-mismatch"
    with pytest.raises(HypothesisFailed) as exc:
        check_and_invert_multiplicative(Y, MY, phi, 2)
    assert exc.value.witness


def test_finite_carrier_omits_columns_outside_it():
    Y, MY = free_monoidal_closure(chain(3, 3), 2)
    phi = MultiplicativeSpan("d1", tuple(Y.levels[2]), dict(MY.product[2]), "[]",
                             lambda w: Y.d(2, 1, w), lambda w: "1", scalars())
    report = check_and_invert_multiplicative(Y, MY, phi, 2)
    assert report.passed
    assert any("omitted" in c.note for c in report.certificates)


def test_contraction_implies_unitality():
    X, M, _, _, phis = _characters()
    tried = list(phis)
    tried.append(identity_character(X, M, "shifted", lambda f: "t^1", truncated_polynomial(4)))
    tried.append(MultiplicativeSpan("constant", tuple(X.levels[1]), dict(M.product[1]),
                                    M.eta(X, 1), lambda f: f, lambda f: "1", scalars(),
                                    lift=lambda f: (f,)))
    Y, MY, pw = principal_word_span(chain(3, 3))
    seen_contracting = 0
    for phi, space in [(p, (X, M)) for p in tried] + [(pw, (Y, MY))]:
        checks = check_hypotheses(*space, phi)
        if checks[3]:
            seen_contracting += 1
            assert checks[2]
    assert seen_contracting >= 3


# ---------------------------------------------------------------------------
# properties

labels = st.sampled_from("abc")


def spans_between(name):
    return st.lists(st.tuples(labels, labels), max_size=5).map(
        lambda legs: FiniteSpan(name, tuple(range(len(legs))),
                                {k: a for k, (a, _) in enumerate(legs)},
                                {k: b for k, (_, b) in enumerate(legs)}))


@settings(max_examples=50, deadline=None)
@given(spans_between("R"), spans_between("S"), spans_between("T"))
def test_composition_associative_with_certificate(R, S, T):
    left = compose_spans(compose_spans(R, S), T)
    right = compose_spans(R, compose_spans(S, T))
    cert = check_span_iso(left, right)
    assert cert and replay(cert, left, right)


@settings(max_examples=50, deadline=None)
@given(spans_between("R"), spans_between("S"))
def test_composite_matrix_is_matrix_product(R, S):
    cols = tuple("abc")
    composite = compose_spans(R, S).matrix(cols)
    product = S.matrix(cols) @ R.matrix(cols)
    assert not composite.difference(product)


@settings(max_examples=30, deadline=None)
@given(spans_between("R"))
def test_identity_span_is_neutral(R):
    ident = FiniteSpan("id", tuple("abc"), {x: x for x in "abc"}, {x: x for x in "abc"})
    assert check_span_iso(compose_spans(R, ident), R)
    assert check_span_iso(compose_spans(ident, R), R)


@pytest.mark.parametrize("key", [("surj", 4), ("chain", 3), ("divisor", 12), ("boolean", 3)])
def test_convolved_span_matrix_matches_convolution(key):
    B, _ = bialgebra_of(key)
    X, M = B.X, B.M
    cols = B.ids
    for a in range(3):
        for b in range(3):
            Sa, Sb = canonical_span(X, M, "S", a), canonical_span(X, M, "S", b)
            lhs = convolve_spans(X, Sa, Sb, M.mul1).matrix(cols)
            rhs = convolve(B, Sa.matrix(cols), Sb.matrix(cols), B.algebra)
            assert not lhs.difference(rhs), (a, b)
