"""Exact dense matrices over ℚ or any exact field.

Entries are kept as Python objects supporting ``+ - * /``; the default scalar
domain is :class:`fractions.Fraction`.  Number-field and formal extension
elements plug into the same routines through a field object exposing
``zero``, ``one`` and ``coerce``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InvalidInput


class RationalField:
    """The field ℚ, backed by :class:`fractions.Fraction`."""

    zero = Fraction(0)
    one = Fraction(1)
    degree = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, float):
            raise InvalidInput(f"refusing inexact float {x!r}; pass a string or Fraction")
        try:
            return Fraction(x)
        except TypeError as exc:
            raise InvalidInput(f"cannot coerce {x!r} to a rational") from exc

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def parse_rational(x) -> Fraction:
    return QQ.coerce(x)


class Matrix:
    """Immutable dense matrix.

    >>> Matrix.rational([[1, 2], [3, 4]]).det()
    Fraction(-2, 1)
    """

    __slots__ = ("_rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None, field=QQ):
        data = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise InvalidInput("ragged matrix rows")
            if ncols is not None and ncols != width:
                raise InvalidInput("declared column count does not match rows")
        else:
            width = ncols or 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self.field = field

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, rows) -> "Matrix":
        return cls(rows, field=QQ)

    @classmethod
    def identity(cls, n: int, field=QQ) -> "Matrix":
        return cls([[field.one if i == j else field.zero for j in range(n)] for i in range(n)], field=field)

    @classmethod
    def zeros(cls, m: int, n: int, field=QQ) -> "Matrix":
        return cls([[field.zero] * n for _ in range(m)], ncols=n, field=field)

    @classmethod
    def diag(cls, entries, field=QQ) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else field.zero for j in range(n)] for i in range(n)], field=field)

    @classmethod
    def from_columns(cls, cols, nrows: int | None = None, field=QQ) -> "Matrix":
        cols = [list(c) for c in cols]
        if not cols:
            return cls.zeros(nrows or 0, 0, field)
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))], field=field)

    @classmethod
    def block_diag(cls, blocks, field=QQ) -> "Matrix":
        n = sum(b.nrows for b in blocks)
        out = [[field.zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[off + i][off + j] = b[i, j]
            off += b.nrows
        return cls(out, ncols=n, field=field)

    # -- access -----------------------------------------------------------
    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        return tuple(x for row in self._rows for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i):
        return self._rows[i]

    def col(self, j):
        return tuple(r[j] for r in self._rows)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self):
        return [list(r) for r in self._rows]

    def is_square(self):
        return self.nrows == self.ncols

    def is_integer(self):
        return all(isinstance(x, Fraction) and x.denominator == 1 for x in self.entries)

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def is_identity(self):
        return self.is_square() and all(
            (x == 1) if i == j else (x == 0) for i, r in enumerate(self._rows) for j, x in enumerate(r)
        )

    def over(self, field) -> "Matrix":
        if field is self.field:
            return self
        return Matrix(self._rows, ncols=self.ncols, field=field)

    def map(self, fn, field=None) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self._rows], ncols=self.ncols, field=field or self.field)

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.shape, self.entries))

    def _check_same(self, other):
        if self.shape != other.shape:
            raise InvalidInput(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                      ncols=self.ncols, field=self.field)

    def __sub__(self, other):
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                      ncols=self.ncols, field=self.field)

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c) -> "Matrix":
        return self.map(lambda x: c * x)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise InvalidInput(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            zero = self.field.zero
            out = []
            for r in self._rows:
                out.append([_dot(r, c, zero) for c in cols])
            return Matrix(out, ncols=other.ncols, field=_wider(self.field, other.field))
        # vector
        v = list(other)
        if len(v) != self.ncols:
            raise InvalidInput("vector length mismatch")
        return tuple(_dot(r, v, self.field.zero) for r in self._rows)

    def __pow__(self, k: int):
        if not self.is_square():
            raise InvalidInput("power of non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self._rows)] if self._rows else [],
                      ncols=self.nrows, field=self.field)

    T = property(transpose)

    def hstack(self, other) -> "Matrix":
        return Matrix([list(a) + list(b) for a, b in zip(self._rows, other._rows)], field=_wider(self.field, other.field))

    def vstack(self, other) -> "Matrix":
        return Matrix(list(self._rows) + list(other._rows), ncols=self.ncols, field=_wider(self.field, other.field))

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols), field=self.field)

    def trace(self):
        t = self.field.zero
        for i in range(min(self.shape)):
            t = t + self._rows[i][i]
        return t

    # -- elimination based ----------------------------------------------
    def rref(self):
        return rref(self._rows, self.field)

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self):
        if not self.is_square():
            raise InvalidInput("determinant of non-square matrix")
        return det(self._rows, self.field)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise InvalidInput("inverse of non-square matrix")
        n = self.nrows
        aug = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self._rows)]
        red, pivots = rref(aug, self.field)
        if pivots[:n] != list(range(n)):
            raise InvalidInput("matrix is singular")
        return Matrix([r[n:] for r in red], ncols=n, field=self.field)

    def kernel(self):
        """Basis of the right kernel as a list of tuples."""
        return kernel(self._rows, self.ncols, self.field)

    def solve(self, b):
        """One solution of ``self @ x = b`` or ``None``."""
        return solve(self._rows, list(b), self.ncols, self.field)

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self._rows]})"

    # -- serialisation ----------------------------------------------------
    def to_json(self):
        return [[str(x) for x in r] for r in self._rows]

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls.rational(data)


RatMatrix = Matrix


def _dot(r, c, zero):
    s = zero
    for a, b in zip(r, c):
        if a != 0 and b != 0:
            s = s + a * b
    return s


def _wider(f1, f2):
    if f1 == f2:
        return f1
    if isinstance(f1, RationalField):
        return f2
    if isinstance(f2, RationalField):
        return f1
    # a formal extension wins over its base field
    if getattr(f1, "base", None) == f2:
        return f1
    if getattr(f2, "base", None) == f1:
        return f2
    raise InvalidInput(f"incompatible fields {f1!r} and {f2!r}")


def rref(rows, field=QQ):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    pivots = []
    r = 0
    for j in range(n):
        if r >= m:
            break
        p = next((i for i in range(r, m) if a[i][j] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = field.one / a[r][j]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    return a, pivots


def det(rows, field=QQ):
    a = [list(r) for r in rows]
    n = len(a)
    d = field.one
    for j in range(n):
        p = next((i for i in range(j, n) if a[i][j] != 0), None)
        if p is None:
            return field.zero
        if p != j:
            a[j], a[p] = a[p], a[j]
            d = -d
        d = d * a[j][j]
        inv = field.one / a[j][j]
        for i in range(j + 1, n):
            if a[i][j] != 0:
                f = a[i][j] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[j])]
    return d


def kernel(rows, ncols, field=QQ):
    if not rows:
        return [tuple(field.one if i == j else field.zero for i in range(ncols)) for j in range(ncols)]
    red, pivots = rref(rows, field)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(tuple(v))
    return basis


def solve(rows, b, ncols, field=QQ):
    if len(rows) != len(b):
        raise InvalidInput("right-hand side length mismatch")
    aug = [list(r) + [x] for r, x in zip(rows, b)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return tuple(x)


def span_basis(vectors, field=QQ):
    """Row-reduced basis of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    red, pivots = rref(vectors, field)
    return [tuple(red[i]) for i in range(len(pivots))]


def rank_of(vectors, field=QQ) -> int:
    return len(span_basis(vectors, field))
