"""Dense univariate polynomials with rational coefficients.

Coefficients are stored low degree first, without trailing zeros, so the
zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from ..errors import InvalidInput
from .matrix import Matrix, QQ


def _trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim(QQ.coerce(c) for c in coeffs)

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_monic(self):
        return self.lc == 1

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _lift(o):
        return o if isinstance(o, Poly) else Poly([o])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(), self
        quo = [Fraction(0)] * dq
        inv = 1 / other.lc
        for k in range(dq - 1, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quo), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other) -> bool:
        return (other % self).is_zero()

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise InvalidInput("polynomial division is not exact")
        return q

    # -- calculus and evaluation -----------------------------------------
    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, A: Matrix) -> Matrix:
        """Horner evaluation at a square matrix."""
        n = A.nrows
        acc = Matrix.zeros(n, n, A.field)
        ident = Matrix.identity(n, A.field)
        for c in reversed(self.coeffs):
            acc = acc @ A + ident.scale(c)
        return acc

    def compose(self, q):
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def shift(self, a):
        """p(x + a)."""
        return self.compose(Poly([a, 1]))

    def reverse(self):
        return Poly(reversed(self.coeffs))

    # -- content and normalisation ---------------------------------------
    def content(self) -> Fraction:
        """Positive rational content: self / content is primitive integral."""
        if not self.coeffs:
            return Fraction(0)
        num = reduce(gcd, (c.numerator for c in self.coeffs))
        den = reduce(lcm, (c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def primitive(self):
        """Primitive integral associate with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return Poly([x / c for x in self.coeffs])

    def monic(self):
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return Poly([c * inv for c in self.coeffs])

    def int_coeffs(self):
        if not self.is_integral():
            raise InvalidInput("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    # -- display / serialisation ----------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([QQ.coerce(c) for c in data])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = Poly([1]), Poly()
    t0, t1 = Poly(), Poly([1])
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def is_squarefree(p: Poly) -> bool:
    if p.is_zero():
        return False
    return poly_gcd(p, p.derivative()).is_constant()


def squarefree_decomposition(p: Poly):
    """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
    if p.is_zero():
        raise InvalidInput("squarefree decomposition of the zero polynomial")
    f = p.monic()
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


def char_poly(A: Matrix) -> Poly:
    """Characteristic polynomial det(xI − A) by Faddeev–LeVerrier."""
    if not A.is_square():
        raise InvalidInput("characteristic polynomial of a non-square matrix")
    if A.field != QQ:
        raise InvalidInput("char_poly expects a rational matrix")
    n = A.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n)
    M = Matrix.zeros(n, n)
    for k in range(1, n + 1):
        M = A @ M + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(A @ M).trace() / k
    return Poly(coeffs)


def min_poly(A: Matrix) -> Poly:
    """Minimal polynomial as the lcm of the Krylov minimal polynomials of e_i."""
    if not A.is_square():
        raise InvalidInput("minimal polynomial of a non-square matrix")
    n = A.nrows
    result = Poly([1])
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        result = poly_lcm(result, _krylov_min_poly(A, e))
    return result


def _krylov_min_poly(A: Matrix, v) -> Poly:
    vecs = [v]
    while True:
        w = A @ vecs[-1]
        M = Matrix.from_columns(vecs)
        sol = M.solve(w)
        if sol is not None:
            # w = sum sol_i A^i v  =>  x^k - sum sol_i x^i
            return Poly([-s for s in sol] + [1])
        vecs.append(w)
