"""Hermite and Smith normal forms, and integer linear solving."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from ..errors import InvalidInput
from .matrix import Matrix


def _int_rows(M):
    if isinstance(M, Matrix):
        rows = M.rows
    else:
        rows = [[Fraction(x) if not isinstance(x, str) else Fraction(x) for x in r] for r in M]
    out = []
    for r in rows:
        row = []
        for x in r:
            x = Fraction(x)
            if x.denominator != 1:
                raise InvalidInput(f"expected an integer matrix, found entry {x}")
            row.append(x.numerator)
        out.append(row)
    return out


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _xgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _as_matrix(rows, ncols):
    return Matrix(rows, ncols=ncols)


def hnf(M):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = U @ M``.  Pivots are
    positive, entries above a pivot lie in ``[0, pivot)`` and zero rows sit
    at the bottom.
    """
    a = _int_rows(M)
    m = len(a)
    n = len(a[0]) if a else (M.ncols if isinstance(M, Matrix) else 0)
    H, U = _hnf_int(a, m, n)
    return _as_matrix(H, n), _as_matrix(U, m)


def _hnf_int(a, m, n):
    a = [list(r) for r in a]
    u = _identity(m)
    r = 0
    for j in range(n):
        if r >= m:
            break
        # fold every lower entry of column j into row r with gcd steps
        for i in range(r + 1, m):
            if a[i][j] == 0:
                continue
            if a[r][j] == 0:
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
                continue
            g, s, t = _xgcd(a[r][j], a[i][j])
            p, q = a[r][j] // g, a[i][j] // g
            ra, ia = a[r], a[i]
            a[r] = [s * x + t * y for x, y in zip(ra, ia)]
            a[i] = [-q * x + p * y for x, y in zip(ra, ia)]
            ru, iu = u[r], u[i]
            u[r] = [s * x + t * y for x, y in zip(ru, iu)]
            u[i] = [-q * x + p * y for x, y in zip(ru, iu)]
        piv = a[r][j]
        if piv == 0:
            continue
        if piv < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
            piv = -piv
        for i in range(r):
            f = a[i][j] // piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u


def snf(M):
    """Smith normal form ``(D, U, V)`` with ``D = U @ M @ V``.

    Diagonal entries are non-negative and satisfy ``d_i | d_{i+1}``.
    """
    a = _int_rows(M)
    m = len(a)
    n = len(a[0]) if a else (M.ncols if isinstance(M, Matrix) else 0)
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _as_matrix(a, n), _as_matrix(u, m), _as_matrix(v, n)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an integer linear solve of ``M x = b``.

    ``consistent`` is True when some rational solution exists.
    ``integer_solution`` is an integral solution or ``None``; the rational
    solution is always the particular one with free Smith coordinates zero.
    ``integer_kernel`` spans the integer solutions of ``M x = 0``.
    """

    consistent: bool
    rational_solution: Optional[tuple]
    integer_solution: Optional[tuple]
    integer_kernel: tuple
    invariant_factors: tuple

    @property
    def has_integer_solution(self) -> bool:
        return self.integer_solution is not None

    def to_json(self):
        fmt = lambda v: None if v is None else [str(x) for x in v]
        return {
            "consistent": self.consistent,
            "rational_solution": fmt(self.rational_solution),
            "integer_solution": fmt(self.integer_solution),
            "integer_kernel": [fmt(k) for k in self.integer_kernel],
            "invariant_factors": [str(d) for d in self.invariant_factors],
        }


def solve_integer(M, b) -> SolveResult:
    """Solve ``M x = b`` over ℤ, reporting the rational picture when it fails."""
    if not isinstance(M, Matrix):
        M = Matrix.rational(M)
    b = [Fraction(x) if not isinstance(x, str) else Fraction(x) for x in b]
    if len(b) != M.nrows:
        raise InvalidInput(f"right-hand side has length {len(b)}, expected {M.nrows}")
    m, n = M.shape
    D, U, V = snf(M)
    c = U @ b
    diag = [D[i, i] for i in range(min(m, n))]
    r = sum(1 for d in diag if d != 0)
    kernel = tuple(V.col(j) for j in range(r, n))
    factors = tuple(diag[:r])
    if any(c[i] != 0 for i in range(r, m)):
        return SolveResult(False, None, None, kernel, factors)
    y = [c[i] / diag[i] for i in range(r)] + [Fraction(0)] * (n - r)
    x = tuple(V @ y)
    integral = all(t.denominator == 1 for t in y)
    return SolveResult(True, x, x if integral else None, kernel, factors)


def integer_kernel(M):
    """Basis of ``{x ∈ ℤ^n : M x = 0}`` in HNF, as a list of tuples."""
    if not isinstance(M, Matrix):
        M = Matrix.rational(M)
    # scale rows to integers; the kernel does not change
    rows = []
    for r in M.rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([x * den for x in r])
    n = M.ncols
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    Mi = Matrix(rows, ncols=n)
    H, U = hnf(Mi.T)
    basis = [U.row(i) for i in range(H.nrows) if all(x == 0 for x in H.row(i))]
    if not basis:
        return []
    Hk, _ = hnf(basis)
    return [Hk.row(i) for i in range(Hk.nrows) if any(x != 0 for x in Hk.row(i))]
