"""Total products on level-1 labels for spaces whose carrier is truncated.

Builders record the name of their product here so that products escaping
the truncation (e.g. ordinal sums of long compositions) are still computable
and survive a JSON round trip.
"""
import json
import re
from functools import reduce


def composition_concat(a: str, b: str) -> str:
    """Ordinal sum of monotone surjections encoded as compositions ``(c1,...,cn)``."""
    parts = [p for p in (a[1:-1], b[1:-1]) if p]
    return "(" + ",".join(parts) + ")"


def word_concat(a: str, b: str) -> str:
    """Concatenation of words ``[x][y]...``; ``[]`` is the empty word."""
    if a == "[]":
        return b
    if b == "[]":
        return a
    return a + b


def forest_union(a: str, b: str) -> str:
    """Disjoint union of surjections encoded by fibre-size multisets ``[3,1,1]``."""
    parts = sorted(json.loads(a) + json.loads(b), reverse=True)
    return "[" + ",".join(map(str, parts)) + "]"


def _composition_atoms(a: str) -> list:
    return [f"({p})" for p in a[1:-1].split(",") if p]


def _word_atoms(a: str) -> list:
    return re.findall(r"\[[^\[\]]*\]", a) if a != "[]" else []


def _forest_atoms(a: str) -> list:
    return [f"[{k}]" for k in json.loads(a)]


_REGISTRY = {
    "composition-concatenation": composition_concat,
    "word-concatenation": word_concat,
    "forest-union": forest_union,
}

_ATOMS = {
    "composition-concatenation": (_composition_atoms, "()"),
    "word-concatenation": (_word_atoms, "[]"),
    "forest-union": (_forest_atoms, "[]"),
}


def atoms(name, label) -> list:
    """Indecomposable factors of ``label`` under the named product."""
    return _ATOMS[name][0](label)


def strip(name, label, drop) -> str:
    """Product of the factors of ``label`` for which ``drop`` is false."""
    split, unit = _ATOMS[name]
    kept = [x for x in split(label) if not drop(x)]
    return reduce(get(name), kept, unit)


def get(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown ambient product {name!r}") from None
