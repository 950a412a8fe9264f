"""Acceptance suite: one test per criterion, each printing one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed even with
output capture on) or ``python3 tests/test_acceptance.py``.
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from incidence import ambient  # noqa: E402
from incidence.bialgebra import (build_bialgebra, connected_quotient, convolve,  # noqa: E402
                                 defect_character, invert_multiplicative, mobius_functor,
                                 neutral, quotient_character, scalars, structural_endomorphism,
                                 truncated_polynomial, verify_weak_antipode, weak_antipode,
                                 zeta_character)
from incidence.builders import (FiniteCategorySpec, monotone_surjection_category,  # noqa: E402
                                nerve_of_category)
from incidence.builders.intervals import IntervalFamilySpec, Poset, interval_family_space  # noqa: E402
from incidence.builders.surjections import surjection_class  # noqa: E402
from incidence.errors import HypothesisFailed  # noqa: E402
from incidence.oracles import (binomial_antipode, binomial_mobius, classical_mobius,  # noqa: E402
                               schmitt_antipode, surjection_coproduct)
from incidence.simplicial import check_decomposition  # noqa: E402
from incidence.spans import (canonical_span, character_span,  # noqa: E402
                             check_and_invert_multiplicative, convolve_spans, identity_character,
                             principal_word_span, verify_identity)

from conftest import bialgebra_of, booleans, chain, closed_poset, faa, surjections  # noqa: E402
from test_simplicial import non_segal  # noqa: E402


def report(number, title, ok, detail="", capsys=None):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title}"
    if detail:
        line += f" ({detail})"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
    assert ok, line


def source(f):
    return sum(int(p) for p in f[1:-1].split(",") if p)


def defect(f):
    parts = [int(p) for p in f[1:-1].split(",") if p]
    return f"t^{sum(parts) - len(parts)}"


def test_criterion_1_objective_theorem(capsys):
    start = time.perf_counter()
    X, M = surjections(5, 6)
    lemma = [verify_identity(X, M, "lemma-idprime", n) for n in range(5)]
    theorem = verify_identity(X, M, "theorem", 4)
    elapsed = time.perf_counter() - start
    lengths = weak_antipode(build_bialgebra(X, M)).lengths
    certified = {f for f in X.levels[1] if lengths[f] <= 4}
    ok = (all(r.passed for r in lemma)
          and all(c.valid for r in lemma for c in r.certificates)
          and theorem.passed
          and set(theorem.exact_columns) == certified == set(X.levels[1])
          and elapsed < 30)
    report(1, "Id' * S_n = S_n + S_{n+1} for n = 0..4 and the level-4 theorem, objectively",
           ok, f"{len(certified)} columns, {elapsed:.1f}s", capsys=capsys)


def test_criterion_2_weak_antipode_matrices(capsys):
    results = {}
    for name, key in (("surjections 5", ("surj", 5)), ("Boolean 6", ("bool", 6))):
        B, W = bialgebra_of(key)
        r = verify_weak_antipode(B, W)
        all_exact = all(W.certificates[f] == "exact" for f in B.ids)
        results[name] = bool(r) and r.info["Id' * S"] and r.info["S * Id'"] and all_exact
    report(2, "Id' * S = e = S * Id' exactly", all(results.values()),
           ", ".join(f"{k}: {'ok' if v else 'bad'}" for k, v in results.items()), capsys=capsys)


def test_criterion_3_connected_boolean(capsys):
    B, W = bialgebra_of(("bool", 6))
    A = B.algebra
    e = neutral(B, A)
    id_s = convolve(B, structural_endomorphism(B, "Id"), W.matrix, A)
    oracle = binomial_antipode(6)
    values = all(W.matrix.column(f"B_{n}") == {f"B_{m}": v for m, v in oracle[n].items()}
                 == {f"B_{n}": (-1) ** n} for n in range(7))
    Q = connected_quotient(B, W)
    ok = id_s == e and values and Q.check and Q.S_H == W.matrix
    report(3, "Boolean family: Id * S = e and S(B_n) = (-1)^n B_n for n <= 6", ok, capsys=capsys)


def test_criterion_4_mobius(capsys):
    detail = []
    ok = True
    for kind, size in (("chain", 3), ("boolean", 4), ("divisor", 60)):
        B, W = bialgebra_of((kind, size))
        _, _, (elements, leq) = closed_poset(kind, size)
        data = mobius_functor(B, W)
        oracle = classical_mobius(elements, leq)
        good = bool(data.check) and all(data.value(f"[{x}<={y}]") == mu
                                        for (x, y), mu in oracle.items())
        detail.append(f"{kind} {size}: {len(oracle)} intervals")
        ok = ok and good
    data = mobius_functor(*bialgebra_of(("bool", 6)))
    oracle = binomial_mobius(6)
    ok = ok and bool(data.check) and all(data.value(f"B_{n}") == oracle[n] for n in range(7))
    report(4, "mu_bar = zeta∘S matches the classical recursion", ok, "; ".join(detail), capsys=capsys)


def test_criterion_5_schmitt(capsys):
    B, W = bialgebra_of(("surj", 5))
    C = monotone_surjection_category(5)
    cols = [f for f in B.ids if source(f) <= 4]
    bad = [f for f in cols
           if W.matrix.column(f) != schmitt_antipode(C, f, ambient.composition_concat, "()")]
    report(5, "alternating sum over strings of non-identity arrows equals S", not bad,
           f"{len(cols)} basis elements" + (f", first mismatch {bad[0]}" if bad else ""), capsys=capsys)


def test_criterion_6_faa_di_bruno(capsys):
    B, W = bialgebra_of(("faa", 4))
    axioms = len(B.checks) == 3 and all(B.checks)
    delta = True
    for f in B.ids:
        fibres = [int(p) for p in f[1:-1].split(",") if p]
        expected = {(surjection_class(a), surjection_class(b)): c
                    for (a, b), c in surjection_coproduct(fibres).items()}
        delta = delta and dict(B.terms[f]) == expected
    Q = connected_quotient(B, W)
    report(6, "Faà di Bruno: axioms, Δ against concrete surjections, pi∘S = S_H∘pi",
           axioms and delta and bool(Q.check), f"{len(B.ids)} classes", capsys=capsys)


def test_criterion_7_general_inversion(capsys):
    B, W = bialgebra_of(("surj", 5))
    Q = connected_quotient(B, W)
    matrix_ok = True
    for phi in (zeta_character(), defect_character(5), quotient_character(Q)):
        _, res = invert_multiplicative(B, phi, W)
        matrix_ok = matrix_ok and bool(res) and res.info["phi * phiS"] and res.info["phiS * phi"]
    X, M = surjections(4, 4)
    Bx = build_bialgebra(X, M)
    Qx = connected_quotient(Bx, weak_antipode(Bx))
    spans = [identity_character(X, M, "zeta", lambda f: "1", scalars()),
             identity_character(X, M, "defect", defect, truncated_polynomial(4)),
             character_span(X, M, "pi", Qx.project, Qx.algebra)]
    span_ok = all(check_and_invert_multiplicative(X, M, phi, 3).passed for phi in spans)
    Y, MY, pw = principal_word_span(chain(3, 3))
    try:
        check_and_invert_multiplicative(Y, MY, pw, 2)
        witness = None
    except HypothesisFailed as exc:
        witness = exc.witness
    report(7, "zeta, defect and pi invert at both levels; the non-CULF span is rejected",
           matrix_ok and span_ok and bool(witness),
           f"witness: {witness[0]['kind']}" if witness else "no witness", capsys=capsys)


def _every_builder():
    C = FiniteCategorySpec(("*",), {"id": ("*", "*")}, {"*": "id"}, {("id", "id"): "id"})
    M3 = Poset.from_relation(list(range(5)), lambda a, b: a == b or a == 0 or b == 4)
    yield "chain nerve", chain(3, 4)
    for kind, size in (("divisor", 12), ("boolean", 3)):
        yield f"{kind} closure", closed_poset(kind, size)[0]
    yield "category nerve", nerve_of_category(C, 4)
    yield "monotone surjections", surjections(4, 4)[0]
    yield "Boolean intervals", booleans(3, 3).X
    yield "diamond intervals", interval_family_space(IntervalFamilySpec([M3], 3), 3).X
    yield "Faà di Bruno", faa(3)[0]


def test_criterion_8_negative_control(capsys):
    r = check_decomposition(non_segal())
    rejected = not r and bool(r.witnesses)
    failing = [name for name, X in _every_builder() if not check_decomposition(X)]
    report(8, "decomposition check rejects the non-Segal example and accepts every builder",
           rejected and not failing, ", ".join(failing) if failing else "", capsys=capsys)


def test_criterion_9_cross_level(capsys):
    instances = 0
    bad = []
    X, M = surjections(5, 6)
    runs = [(X, M, "lemma-idprime", n) for n in range(5)]
    runs += [(X, M, "lemma-rec", n) for n in range(1, 5)]
    runs += [(X, M, "theorem", L) for L in range(1, 5)]
    runs += [(X, M, "mobius", L) for L in range(1, 5)]
    for kind, size in (("chain", 3), ("divisor", 12), ("boolean", 3)):
        Y, MY, _ = closed_poset(kind, size)
        runs += [(Y, MY, "lemma-idprime", 1), (Y, MY, "theorem", 2), (Y, MY, "mobius", 2)]
    for Y, MY, which, n in runs:
        r = verify_identity(Y, MY, which, n)
        cols = tuple(Y.levels[1])
        for lhs, rhs in r.sides:
            instances += 1
            if lhs.matrix(cols) != rhs.matrix(cols) or not r.passed:
                bad.append(f"{which} {n}")
    for key in (("surj", 4), ("chain", 3), ("divisor", 12), ("boolean", 3)):
        B, _ = bialgebra_of(key)
        for a in range(3):
            for b in range(3):
                Sa, Sb = canonical_span(B.X, B.M, "S", a), canonical_span(B.X, B.M, "S", b)
                instances += 1
                lhs = convolve_spans(B.X, Sa, Sb, B.M.mul1).matrix(B.ids)
                if lhs != convolve(B, Sa.matrix(B.ids), Sb.matrix(B.ids), B.algebra):
                    bad.append(f"S_{a} * S_{b} on {key}")
    report(9, "span_to_matrix of both sides agrees on every set-level identity",
           instances >= 50 and not bad,
           f"{instances} instances" + (f", mismatches: {bad[:3]}" if bad else ""), capsys=capsys)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
