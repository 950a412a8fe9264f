from fractions import Fraction
from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from incidence.builders import FiniteCategorySpec, nerve_of_category, divisor_poset, poset_nerve
from incidence.builders.intervals import IntervalFamilySpec, Poset, interval_family_space
from incidence.builders.surjections import (BUDGET_ENV, aut_order, finite_surjections_weighted,
                                            surjection_class, union)
from incidence.errors import BudgetExceeded
from incidence.oracles import surjection_aut, surjection_coproduct
from incidence.simplicial import nondegenerate_simplices, validate_structure

from conftest import booleans, chain, faa, surjections


def brute_aut(P, chain_):
    """Order automorphisms of ``P`` fixing every point of ``chain_``."""
    fixed = set(chain_)
    count = 0
    for perm in permutations(range(P.n)):
        if any(perm[x] != x for x in fixed):
            continue
        if all(P.leq(i, j) == P.leq(perm[i], perm[j]) for i in range(P.n) for j in range(P.n)):
            count += 1
    return count


def test_chain_nerve_sizes():
    X = chain(3, 3)
    assert (len(X.levels[1]), len(X.levels[2])) == (6, 10)


def test_terminal_category():
    C = FiniteCategorySpec(("*",), {"id": ("*", "*")}, {"*": "id"}, {("id", "id"): "id"})
    X = nerve_of_category(C, 4)
    assert all(len(level) == 1 for level in X.levels)
    assert validate_structure(X)


def test_divisor_lattice_pairs():
    elements, leq = divisor_poset(12)
    X = poset_nerve(elements, leq, 2)
    pairs = sum(1 for d in range(1, 13) for e in range(1, 13) if 12 % d == 0 == 12 % e and e % d == 0)
    assert len(X.levels[1]) == pairs == 18


def test_boolean_family_classes():
    X = booleans(3).X
    assert X.levels[1] == ("B_0", "B_1", "B_2", "B_3")
    assert [X.aut(1, b) for b in X.levels[1]] == [1, 1, 2, 6]
    assert X.aut(2, "B_2(0,1,2)") == 1


def test_boolean_family_aut_orders_match_brute_force():
    D = booleans(3, 2)
    for level in D.X.levels:
        n = D.X.levels.index(level)
        for x in level:
            P, chain_ = D.representatives[x]
            assert D.X.aut(n, x) == brute_aut(P, chain_), x


def test_other_generator_aut_orders():
    # the diamond with three atoms; its subintervals are chains
    M3 = Poset.from_relation(list(range(5)), lambda a, b: a == b or a == 0 or b == 4)
    D = interval_family_space(IntervalFamilySpec([M3], 4), 2)
    assert validate_structure(D.X)
    for n, level in enumerate(D.X.levels):
        for x in level:
            P, chain_ = D.representatives[x]
            if P.n <= 8:
                assert D.X.aut(n, x) == brute_aut(P, chain_), x
    assert D.dropped_products


def test_point_generator_is_terminal():
    D = interval_family_space(IntervalFamilySpec([Poset.chain(1)], 3), 3)
    assert all(len(level) == 1 for level in D.X.levels)


def test_unbounded_generator_rejected():
    antichain = Poset(2, [1, 2])
    with pytest.raises(ValueError):
        IntervalFamilySpec([antichain], 2)


def test_boolean_coproduct_is_binomial(bool6):
    B, _ = bool6
    for n in range(7):
        for k in range(n + 1):
            assert B.delta[(f"B_{k}", f"B_{n - k}"), f"B_{n}"] == comb(n, k)


def test_surjection_nondegenerates_small():
    X, _ = surjections(3)
    assert set(nondegenerate_simplices(X, 1)) == {"(2)", "(3)", "(1,2)", "(2,1)"}


@pytest.mark.parametrize("m", range(1, 7))
def test_surjection_nondegenerate_count(m):
    X, _ = surjections(6)
    nd = nondegenerate_simplices(X, 1)
    with_source = [f for f in nd if sum(int(p) for p in f[1:-1].split(",") if p) == m]
    assert len(with_source) == 2 ** (m - 1) - 1


def test_faa_aut_orders():
    X, _ = faa(4)
    assert X.aut(1, surjection_class([2])) == 2
    assert X.aut(1, surjection_class([1, 1])) == 2
    for f in X.levels[1]:
        fibres = [int(p) for p in f[1:-1].split(",") if p]
        if sum(fibres) <= 4:
            assert X.aut(1, f) == surjection_aut(fibres), f


def test_faa_union():
    assert union((2,), (2,), 1) == (2, 2)
    X, M = faa(4)
    assert M.mul(1, "[2]", "[2]") == "[2,2]"


def test_faa_coproduct_matches_concrete_surjections(faa4):
    B, _ = faa4
    for f in B.ids:
        fibres = [int(p) for p in f[1:-1].split(",") if p]
        expected = {(surjection_class(a), surjection_class(b)): c
                    for (a, b), c in surjection_coproduct(fibres).items()}
        got = {ab: c for ab, c in B.terms[f]}
        assert got == expected, f


def test_faa_budget(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "10")
    with pytest.raises(BudgetExceeded):
        finite_surjections_weighted(5, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_aut_order_matches_brute_force(fibres):
    encoded = tuple(sorted(fibres, reverse=True))
    assert aut_order(encoded, 1) == surjection_aut(fibres)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4))
def test_boolean_products_add_height(a, b):
    D = booleans(4)
    c = D.M.mul(1, f"B_{a}", f"B_{b}")
    assert c == (f"B_{a + b}" if a + b <= 4 else None)


def test_weights_are_positive():
    for X in (faa(3)[0], booleans(3).X):
        assert all(X.aut(n, x) >= 1 for n, level in enumerate(X.levels) for x in level)
    assert Fraction(1, booleans(3).X.aut(1, "B_3")) == Fraction(1, 6)
