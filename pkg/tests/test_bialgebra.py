import pytest
from hypothesis import given, settings, strategies as st

from incidence import ambient
from incidence.bialgebra import (Character, apply_functional, build_bialgebra, check_coassociative,
                                 connected_quotient, convolve, defect_character, invert_multiplicative,
                                 mobius_functor, neutral, quotient_character, scalars,
                                 structural_endomorphism, truncated_polynomial, verify_weak_antipode,
                                 weak_antipode, zeta_character)
from incidence.builders import monotone_surjection_category
from incidence.errors import AxiomViolation, ClosureEscape, ExactnessNotCertified, HypothesisFailed
from incidence.linalg import QMatrix
from incidence.oracles import (binomial_antipode, binomial_mobius, classical_mobius,
                               reversion_antipode, schmitt_antipode, schmitt_recursive)
from incidence.simplicial import MonoidalStructure, from_nondegenerate

from conftest import bialgebra_of, chain, closed_poset, surjections


def source(f):
    return sum(int(p) for p in f[1:-1].split(",") if p)


def compositions(m, least=1):
    if m == 0:
        return [()]
    return [(k,) + rest for k in range(least, m + 1) for rest in compositions(m - k, least)]


def label(parts, brackets="()"):
    return brackets[0] + ",".join(map(str, parts)) + brackets[1]


# ---------------------------------------------------------------------------
# construction

def test_chain_coproduct():
    B = build_bialgebra(chain(3, 3))
    assert dict(B.terms["0<=2"]) == {("0<=0", "0<=2"): 1, ("0<=1", "1<=2"): 1,
                                    ("0<=2", "2<=2"): 1}


def test_surjection_coproduct(surj5):
    B, _ = surj5
    assert dict(B.terms["(2)"]) == {("(1,1)", "(2)"): 1, ("(2)", "(1)"): 1}


def test_zeta_squared_counts_factorisations():
    B = build_bialgebra(chain(3, 3))
    zeta = QMatrix.from_columns(B.ids, {f: {"1": 1} for f in B.ids}, ("1",))
    assert convolve(B, zeta, zeta, scalars())["1", "0<=2"] == 3


def test_axioms_recorded(surj5, bool6, faa4):
    for B, _ in (surj5, bool6, faa4):
        assert [c.name for c in B.checks] == ["coassociativity", "counit",
                                             "bialgebra compatibility"]
        assert all(B.checks)


def test_coassociativity_failure_has_witness():
    X = from_nondegenerate({0: {"a": ()}, 1: {"f": ("a", "a"), "g": ("a", "a")},
                            2: {"t": ("f", "f", "g")}}, 3)
    assert not check_coassociative(build_bialgebra(X, check=False))
    with pytest.raises(AxiomViolation) as exc:
        build_bialgebra(X)
    assert exc.value.witness


def test_incompatible_product_rejected():
    X, M = surjections(4)
    table = [dict(t) for t in M.product]
    table[1]["(2)", "(2)"] = "(4)"
    with pytest.raises(AxiomViolation) as exc:
        build_bialgebra(X, MonoidalStructure("0", table))
    assert exc.value.witness[0]["pair"] == ["(2)", "(2)"]


# ---------------------------------------------------------------------------
# structural endomorphisms and the weak antipode

def test_idprime_and_s_powers(surj5):
    B, W = surj5
    idp = structural_endomorphism(B, "Id'")
    assert idp.column("(1,1,1)") == {"()": 1}
    assert idp == W.powers[0] + W.powers[1]
    assert W.powers[2].column("(3)") == {"(1,2,2)": 1, "(2,1,2)": 1}
    assert structural_endomorphism(B, "S", 2) == W.powers[2]
    assert convolve(B, W.powers[1], W.powers[1], B.algebra) == W.powers[2]
    assert structural_endomorphism(B, "e") == W.powers[0]


def test_surjection_antipode_values(surj5):
    B, W = surj5
    assert W.matrix.column("(2)") == {"(2)": -1}
    assert W.certificates["(2)"] == "exact"
    for n in range(6):
        assert W.matrix.column(label([1] * n)) == {"()": 1}
    assert W.matrix.column("(3)") == {"(3)": -1, "(1,2,2)": 1, "(2,1,2)": 1}


def test_weak_antipode_identities(surj5, bool6):
    for B, W in (surj5, bool6):
        r = verify_weak_antipode(B, W)
        assert r, r.witnesses
    assert verify_weak_antipode(*surj5).info["connected"] is False
    assert verify_weak_antipode(*bool6).info["Id * S"] is True


def test_column_check_at_two(surj5):
    B, W = surj5
    lhs = convolve(B, structural_endomorphism(B, "Id'"), W.matrix, B.algebra)
    assert lhs.column("(2)") == {} == neutral(B, B.algebra).column("(2)")


def test_boolean_antipode_matches_binomial_oracle(bool6):
    B, W = bool6
    oracle = binomial_antipode(6)
    for n in range(7):
        assert W.matrix.column(f"B_{n}") == {f"B_{m}": v for m, v in oracle[n].items()}
        assert W.matrix.column(f"B_{n}") == {f"B_{n}": (-1) ** n}


def test_schmitt_formulas(surj5):
    B, W = surj5
    C = monotone_surjection_category(5)
    mul = ambient.composition_concat
    for f in B.ids:
        if source(f) > 4:
            continue
        explicit = schmitt_antipode(C, f, mul, "()")
        assert explicit == schmitt_recursive(C, f, mul, "()")
        assert W.matrix.column(f) == explicit, f


def test_uncertified_columns_raise():
    B, _ = bialgebra_of(("surj", 4))
    with pytest.raises(ExactnessNotCertified) as exc:
        weak_antipode(B, max_power=2)
    assert exc.value.witness
    W = weak_antipode(B, max_power=2, strict=False)
    assert W.uncertified and all(W.certificates[f] == "exact" for f in ("(2)", "(1)"))


def test_lengths(surj5):
    _, W = surj5
    assert W.lengths["(2)"] == 1
    assert W.lengths["(1,1)"] == 0
    assert W.max_length == 4


# ---------------------------------------------------------------------------
# Moebius

@pytest.mark.parametrize("kind,size", [("chain", 3), ("boolean", 4), ("divisor", 60),
                                       ("divisor", 12)])
def test_mobius_matches_classical_recursion(kind, size):
    B, W = bialgebra_of((kind, size))
    _, _, (elements, leq) = closed_poset(kind, size)
    data = mobius_functor(B, W)
    assert data.check, data.check.witnesses
    for (x, y), mu in classical_mobius(elements, leq).items():
        assert data.value(f"[{x}<={y}]") == mu


def test_chain_mobius_values():
    B, W = bialgebra_of(("chain", 3))
    data = mobius_functor(B, W)
    assert [data.value(f) for f in ("[0<=0]", "[0<=1]", "[0<=2]")] == [1, -1, 0]


def test_boolean_mobius(bool6):
    data = mobius_functor(*bool6)
    oracle = binomial_mobius(6)
    assert [data.value(f"B_{n}") for n in range(7)] == [oracle[n] for n in range(7)]
    assert [oracle[n] for n in range(7)] == [(-1) ** n for n in range(7)]


def test_surjection_mobius(surj5):
    data = mobius_functor(*surj5)
    assert data.value("(2,2)") == 1
    assert data.phis[1]["1", "(2,2)"] == 1 and data.phis[2]["1", "(2,2)"] == 2
    assert data.check


def test_phi_is_zeta_after_s(surj5):
    B, W = surj5
    data = mobius_functor(B, W)
    for n, P in enumerate(W.powers):
        assert data.phis[n] == apply_functional(lambda r: 1, P, B.ids)


# ---------------------------------------------------------------------------
# connected quotient

def test_surjection_quotient(surj5):
    B, W = surj5
    Q = connected_quotient(B, W)
    assert Q.check
    strict = {label(c) for m in range(2, 6) for c in compositions(m, 2)}
    assert set(Q.basis) == {"()"} | strict
    assert Q.S_H.column("(2)") == {"(2)": -1}
    assert Q.project("(1,2,1,3)") == "(2,3)"


def test_faa_quotient_matches_series_reversion(faa4):
    B, W = faa4
    Q = connected_quotient(B, W)
    assert Q.check
    assert Q.S_H.column("[2]") == {"[2]": -1}
    for n, value in reversion_antipode(4).items():
        assert Q.S_H.column(f"[{n}]") == {label(m, "[]"): c for m, c in value.items()}


def test_boolean_quotient_is_trivial(bool6):
    B, W = bool6
    Q = connected_quotient(B, W)
    assert Q.check and Q.S_H == W.matrix


# ---------------------------------------------------------------------------
# multiplicative characters

def test_zeta_inverse_is_mobius(surj5):
    B, W = surj5
    inv, res = invert_multiplicative(B, zeta_character(), W)
    assert res, res.witnesses
    assert inv == mobius_functor(B, W).mu_bar


def test_defect_and_quotient_characters(surj5):
    B, W = surj5
    for phi in (defect_character(5), quotient_character(connected_quotient(B, W))):
        _, res = invert_multiplicative(B, phi, W)
        assert res, res.witnesses


def test_defect_values(surj5):
    B, W = surj5
    inv, _ = invert_multiplicative(B, defect_character(5), W)
    assert inv.column("(3)") == {"t^2": 1}
    assert inv.column("(2)") == {"t^1": -1}


def test_non_multiplicative_character_rejected(surj5):
    B, W = surj5
    A = truncated_polynomial(5)
    parts = lambda f: [int(p) for p in f[1:-1].split(",") if p]  # noqa: E731
    bad = Character("sources", A, lambda f: {f"t^{sum(parts(f))}": 1})
    with pytest.raises(HypothesisFailed) as exc:
        invert_multiplicative(B, bad, W)
    assert "class" in exc.value.witness
    square = Character("square", truncated_polynomial(16), lambda f: {f"t^{(sum(parts(f)) - len(parts(f))) ** 2}": 1})
    with pytest.raises(HypothesisFailed) as exc:
        invert_multiplicative(B, square, W)
    assert "pair" in exc.value.witness


def test_target_escape_is_reported(surj5):
    B, W = surj5
    with pytest.raises(ClosureEscape):
        invert_multiplicative(B, defect_character(1), W)


# ---------------------------------------------------------------------------
# properties

def _functionals(ids):
    return st.dictionaries(st.sampled_from(ids), st.integers(-2, 2), max_size=len(ids)).map(
        lambda d: QMatrix.from_columns(ids, {f: {"1": v} for f, v in d.items()}, ("1",)))


CHAIN_IDS = tuple(build_bialgebra(chain(4, 3)).ids)


@settings(max_examples=40, deadline=None)
@given(_functionals(CHAIN_IDS), _functionals(CHAIN_IDS), _functionals(CHAIN_IDS))
def test_convolution_is_associative_and_unital(F, G, H):
    B = build_bialgebra(chain(4, 3))
    Q = scalars()
    assert convolve(B, convolve(B, F, G, Q), H, Q) == convolve(B, F, convolve(B, G, H, Q), Q)
    e = neutral(B, Q)
    assert convolve(B, e, F, Q) == F == convolve(B, F, e, Q)


SURJ_IDS = [f for f in bialgebra_of(("surj", 5))[0].ids if source(f) <= 5]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SURJ_IDS), st.sampled_from(SURJ_IDS))
def test_antipode_is_antimultiplicative_in_quotient(a, b):
    # S itself is not: S sends degenerate factors to the unit
    B, W = bialgebra_of(("surj", 5))
    Q = connected_quotient(B, W)
    ab = B.M.mul(1, a, b)
    if ab is None:
        return
    lhs: dict = {}
    for x, u in W.matrix.column(ab).items():
        lhs[Q.project(x)] = lhs.get(Q.project(x), 0) + u
    rhs: dict = {}
    for x, u in W.matrix.column(b).items():
        for y, v in W.matrix.column(a).items():
            z = Q.project(B.mul1(x, y))
            rhs[z] = rhs.get(z, 0) + u * v
    assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}


def test_counit_values(surj5, faa4):
    for B, _ in (surj5, faa4):
        for f in B.ids:
            assert B.epsilon(f) == (1 if f in B.degenerate else 0)
