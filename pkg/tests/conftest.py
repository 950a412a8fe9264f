from functools import lru_cache

import pytest

from incidence.bialgebra import build_bialgebra, weak_antipode
from incidence.builders import (boolean_poset, chain_poset, divisor_poset,
                                free_monoidal_closure, monotone_surjection_space, poset_nerve)
from incidence.builders.intervals import boolean_intervals
from incidence.builders.surjections import finite_surjections_weighted


@lru_cache(maxsize=None)
def surjections(max_source, N=3):
    return monotone_surjection_space(max_source, N)


@lru_cache(maxsize=None)
def chain(k=3, N=3):
    return poset_nerve(*chain_poset(k), N)


@lru_cache(maxsize=None)
def closed_poset(kind, size, N=3):
    maker = {"chain": chain_poset, "divisor": divisor_poset, "boolean": boolean_poset}[kind]
    elements, leq = maker(size)
    return free_monoidal_closure(poset_nerve(elements, leq, N), 1) + ((elements, leq),)


@lru_cache(maxsize=None)
def booleans(bound, top_level=2):
    return boolean_intervals(bound, top_level)


@lru_cache(maxsize=None)
def faa(max_n, top_level=3):
    return finite_surjections_weighted(max_n, top_level)


@lru_cache(maxsize=None)
def bialgebra_of(key):
    kind, arg = key
    if kind == "surj":
        X, M = surjections(arg)
    elif kind == "bool":
        D = booleans(arg)
        X, M = D.X, D.M
    elif kind == "faa":
        X, M = faa(arg)
    else:
        X, M, _ = closed_poset(kind, arg)
    B = build_bialgebra(X, M)
    return B, weak_antipode(B)


@pytest.fixture(scope="session")
def surj5():
    return bialgebra_of(("surj", 5))


@pytest.fixture(scope="session")
def bool6():
    return bialgebra_of(("bool", 6))


@pytest.fixture(scope="session")
def faa4():
    return bialgebra_of(("faa", 4))
