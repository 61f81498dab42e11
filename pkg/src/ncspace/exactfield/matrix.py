"""Dense exact matrices and Gauss-Jordan elimination."""

from __future__ import annotations

from typing import Sequence

from ..errors import FieldMismatch, ShapeError
from .field import FieldSpec, Scalar


class ExactMatrix:
    """Immutable rows x cols matrix of :class:`Scalar` over one field.

    Args:
        field: the common field of every entry.
        rows: nested sequences; entries may be Scalars, ints or Fractions.
    """

    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        data = tuple(tuple(_coerce(field, x) for x in row) for row in rows)
        self.nrows = len(data)
        if ncols is None:
            if not data:
                raise ShapeError("matrix needs at least one row or an explicit column count")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ShapeError("ragged matrix rows")
        self.ncols = ncols
        self.rows = data
        self._hash = None

    @classmethod
    def _raw(cls, field, rows, ncols):
        m = cls.__new__(cls)
        m.field = field
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, n: int, m: int | None = None) -> "ExactMatrix":
        m = n if m is None else m
        z = field.zero
        return cls._raw(field, tuple((z,) * m for _ in range(n)), m)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def to_lists(self) -> list[list[Scalar]]:
        return [list(r) for r in self.rows]

    def entries(self) -> list[Scalar]:
        return [x for r in self.rows for x in r]

    def _check(self, other: "ExactMatrix"):
        if other.field != self.field:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix._raw(
            self.field, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return ExactMatrix._raw(
            self.field, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __neg__(self):
        return ExactMatrix._raw(self.field, tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "ExactMatrix":
        c = _coerce(self.field, c)
        return ExactMatrix._raw(self.field, tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in cols:
                acc = z
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return ExactMatrix._raw(self.field, tuple(out), other.ncols)

    __mul__ = __matmul__

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._raw(self.field, tuple(zip(*self.rows)), self.nrows)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shape, self.rows))
        return self._hash

    def map_entries(self, fn, field: FieldSpec | None = None) -> "ExactMatrix":
        return ExactMatrix(field or self.field, [[fn(a) for a in r] for r in self.rows], self.ncols)

    def __repr__(self):
        body = "; ".join(", ".join(a.format() for a in r) for r in self.rows)
        return f"ExactMatrix[{body}]"

    def rank(self) -> int:
        return rref(self)[0]

    def det(self) -> Scalar:
        if not self.is_square:
            raise ShapeError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        det = self.field.one
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return self.field.zero
            if piv != col:
                a[piv], a[col] = a[col], a[piv]
                det = -det
            pv = a[col][col]
            det = det * pv
            inv = pv.inverse()
            for i in range(col + 1, n):
                if a[i][col]:
                    f = a[i][col] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return det

    def is_invertible(self) -> bool:
        return self.is_square and rref(self)[0] == self.nrows


def _coerce(field: FieldSpec, x) -> Scalar:
    if isinstance(x, Scalar):
        if x.field != field:
            raise FieldMismatch(f"entry over {x.field} in a matrix over {field}")
        return x
    return field(x)


def row_echelon(rows: list[list[Scalar]], ncols: int) -> tuple[list[list[Scalar]], list[int]]:
    """In-place reduced row echelon form; returns (nonzero rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        prow = [x * inv for x in rows[r]]
        rows[r] = prow
        nzp = [(j, x) for j, x in enumerate(prow) if x]
        for i in range(nrows):
            if i != r:
                f = rows[i][col]
                if f:
                    row = rows[i]
                    for j, x in nzp:
                        row[j] = row[j] - f * x
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def rref(m: ExactMatrix) -> tuple[int, list[tuple[Scalar, ...]]]:
    """Rank and a basis of the right null space of ``m``.

    The kernel basis is the standard one read off the reduced echelon form:
    one vector per free column, with a 1 in that column.
    """
    field = m.field
    for r in m.rows:
        for x in r:
            if x.field != field:
                raise FieldMismatch("mixed-field entries")
    rows = [list(r) for r in m.rows]
    red, pivots = row_echelon(rows, m.ncols)
    return len(pivots), kernel_from_echelon(field, red, pivots, m.ncols)


def kernel_from_echelon(field: FieldSpec, red, pivots, ncols) -> list[tuple[Scalar, ...]]:
    pivset = set(pivots)
    zero, one = field.zero, field.one
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(red, pivots):
            if row[free]:
                v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def span_rank(field: FieldSpec, vectors: Sequence[Sequence[Scalar]], ncols: int) -> int:
    if not vectors:
        return 0
    return row_echelon([list(v) for v in vectors], ncols)[0].__len__()
