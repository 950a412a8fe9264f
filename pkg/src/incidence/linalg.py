"""Exact sparse rational matrices over weighted bases.

Entries are :class:`fractions.Fraction`; zero entries are never stored.
Row and column keys are arbitrary hashable labels (strings, or tuples of
strings for tensor bases).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Rational = Fraction


@dataclass(frozen=True)
class WeightedBasis:
    """Ordered family of class ids with automorphism orders."""

    ids: tuple
    aut: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("basis ids must be distinct")
        for x in self.ids:
            if self.aut.get(x, 1) < 1:
                raise ValueError(f"aut_order of {x!r} must be >= 1")

    def aut_order(self, x) -> int:
        return self.aut.get(x, 1)

    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    @classmethod
    def plain(cls, ids: Iterable) -> "WeightedBasis":
        return cls(tuple(ids), {})


def _ordered_union(first: Iterable, extra: Iterable) -> tuple:
    seen = dict.fromkeys(first)
    rest = [x for x in dict.fromkeys(extra) if x not in seen]
    rest.sort(key=_sort_key)
    return tuple(seen) + tuple(rest)


def _sort_key(x):
    if isinstance(x, tuple):
        return (1, tuple(_sort_key(y) for y in x))
    return (0, str(x))


class QMatrix:
    """Sparse matrix with declared row and column bases.

    Stored column-major: ``self.columns[col][row] -> Fraction``.
    """

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: Iterable, cols: Iterable, entries: Mapping = ()):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        row_set, col_set = set(self.rows), set(self.cols)
        columns: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (r, c), v in items:
            if r not in row_set or c not in col_set:
                raise KeyError(f"entry ({r!r}, {c!r}) outside declared bases")
            v = Fraction(v)
            if v:
                col = columns.setdefault(c, {})
                total = col.get(r, 0) + v
                if total:
                    col[r] = total
                else:
                    del col[r]
        self.columns = {c: col for c, col in columns.items() if col}

    @classmethod
    def from_columns(cls, cols: Iterable, columns: Mapping, rows: Iterable = ()):
        """Build from ``{col: {row: value}}``; rows not in ``rows`` are appended sorted."""
        cols = tuple(cols)
        used = [r for c in cols for r in columns.get(c, {})]
        all_rows = _ordered_union(rows, used)
        m = cls.__new__(cls)
        m.rows, m.cols = all_rows, cols
        m.columns = {}
        for c in cols:
            col = {r: Fraction(v) for r, v in columns.get(c, {}).items() if v}
            if col:
                m.columns[c] = col
        return m

    @classmethod
    def identity(cls, basis: Iterable) -> "QMatrix":
        basis = tuple(basis)
        return cls(basis, basis, {(x, x): 1 for x in basis})

    @classmethod
    def zero(cls, rows, cols) -> "QMatrix":
        return cls(rows, cols)

    # access
    def __getitem__(self, key) -> Fraction:
        r, c = key
        return self.columns.get(c, {}).get(r, Fraction(0))

    def column(self, c) -> dict:
        return dict(self.columns.get(c, {}))

    def items(self):
        """Nonzero entries in declared (row, col) order."""
        order = {r: i for i, r in enumerate(self.rows)}
        out = []
        for c in self.cols:
            col = self.columns.get(c, {})
            for r in sorted(col, key=order.__getitem__):
                out.append(((r, c), col[r]))
        return out

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def is_zero(self) -> bool:
        return not self.columns

    def nonzero_columns(self) -> list:
        return [c for c in self.cols if c in self.columns]

    # arithmetic
    def _combine(self, other: "QMatrix", sign: int) -> "QMatrix":
        if set(self.cols) != set(other.cols):
            raise ValueError("column bases differ")
        columns = {c: dict(col) for c, col in self.columns.items()}
        for c, col in other.columns.items():
            target = columns.setdefault(c, {})
            for r, v in col.items():
                total = target.get(r, 0) + sign * v
                if total:
                    target[r] = total
                else:
                    target.pop(r, None)
        return QMatrix.from_columns(self.cols, columns, _ordered_union(self.rows, other.rows))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a) -> "QMatrix":
        a = Fraction(a)
        cols = {c: {r: a * v for r, v in col.items()} for c, col in self.columns.items()}
        return QMatrix.from_columns(self.cols, cols, self.rows)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        """Composite ``self ∘ other``: other's rows are fed into self's columns."""
        mine = set(self.cols)
        columns = {}
        for c, col in other.columns.items():
            out: dict = {}
            for mid, v in col.items():
                if mid not in mine:
                    raise KeyError(f"row {mid!r} is not a column of the left factor")
                for r, w in self.columns.get(mid, {}).items():
                    out[r] = out.get(r, 0) + v * w
            columns[c] = out
        return QMatrix.from_columns(other.cols, columns, self.rows)

    def restrict_columns(self, cols: Iterable) -> "QMatrix":
        cols = tuple(cols)
        return QMatrix.from_columns(cols, {c: self.columns.get(c, {}) for c in cols}, self.rows)

    def __eq__(self, other):
        """Equal when the column sets and all nonzero entries agree."""
        if not isinstance(other, QMatrix):
            return NotImplemented
        return set(self.cols) == set(other.cols) and self.columns == other.columns

    __hash__ = None

    def difference(self, other: "QMatrix") -> list:
        """Entries where the two matrices disagree, as (row, col, mine, theirs)."""
        out = []
        for c in _ordered_union(self.cols, other.cols):
            a, b = self.columns.get(c, {}), other.columns.get(c, {})
            for r in _ordered_union(a, b):
                if a.get(r, 0) != b.get(r, 0):
                    out.append((r, c, Fraction(a.get(r, 0)), Fraction(b.get(r, 0))))
        return out

    def __repr__(self):
        return f"QMatrix({len(self.rows)}x{len(self.cols)}, nnz={sum(map(len, self.columns.values()))})"

    def dense(self) -> list:
        return [[self[r, c] for c in self.cols] for r in self.rows]

    # export
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "num", "den"])
        for (r, c), v in self.items():
            w.writerow([label_str(r), label_str(c), v.numerator, v.denominator])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "rows": [_jsonable(r) for r in self.rows],
            "cols": [_jsonable(c) for c in self.cols],
            "entries": [[_jsonable(r), _jsonable(c), v.numerator, v.denominator]
                        for (r, c), v in self.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "QMatrix":
        rows = [_unjson(r) for r in doc["rows"]]
        cols = [_unjson(c) for c in doc["cols"]]
        entries = {(_unjson(r), _unjson(c)): Fraction(n, d) for r, c, n, d in doc["entries"]}
        return cls(rows, cols, entries)


def _jsonable(x):
    return [_jsonable(y) for y in x] if isinstance(x, tuple) else x


def _unjson(x):
    return tuple(_unjson(y) for y in x) if isinstance(x, list) else x


def label_str(x) -> str:
    if isinstance(x, tuple):
        return "⊗".join(label_str(y) for y in x)
    return str(x)


def dumps_matrix(m: QMatrix) -> str:
    return json.dumps(m.to_json(), ensure_ascii=False)


def span_to_matrix(p: Mapping, q: Mapping, aut_m: Mapping | None = None,
                   aut_x: Mapping | None = None, rows: Iterable = (),
                   cols: Iterable = ()) -> QMatrix:
    """Cardinality of the span ``X <-p- M -q-> Y``.

    Each middle class ``m`` contributes ``aut(p(m)) / aut(m)`` to the entry
    ``(q(m), p(m))``.  ``aut_m``/``aut_x`` of ``None`` means a plain set.
    """
    if set(p) != set(q):
        raise ValueError("span legs must be total on the same middle set")
    columns: dict = {}
    for m, x in p.items():
        try:
            am = 1 if aut_m is None else aut_m[m]
            ax = 1 if aut_x is None else aut_x[x]
        except KeyError as exc:
            raise ValueError(f"missing aut data for {exc.args[0]!r}") from None
        col = columns.setdefault(x, {})
        y = q[m]
        col[y] = col.get(y, 0) + Fraction(ax, am)
    cols = _ordered_union(cols, columns)
    return QMatrix.from_columns(cols, columns, rows)


def tensor_product(a: QMatrix, b: QMatrix) -> QMatrix:
    """Kronecker product; pair bases ordered lexicographically."""
    rows = tuple((y, z) for y in a.rows for z in b.rows)
    cols = tuple((x, w) for x in a.cols for w in b.cols)
    columns = {}
    for x, ca in a.columns.items():
        for w, cb in b.columns.items():
            columns[(x, w)] = {(y, z): u * v for y, u in ca.items() for z, v in cb.items()}
    return QMatrix.from_columns(cols, columns, rows)
