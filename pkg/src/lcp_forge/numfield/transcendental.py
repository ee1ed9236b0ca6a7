"""A formal transcendental adjoined to a number field.

Elements of K(π) are rational functions in one indeterminate with
coefficients in K.  The indeterminate is treated as algebraically
independent over K; a float value is attached only for numerics.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import InvalidInput
from ..linalg.matrix import Matrix
from .field import NFElement, NumberField


class KPoly:
    """Polynomial over a field object ``K`` (coefficients low degree first)."""

    __slots__ = ("K", "c")

    def __init__(self, K, coeffs):
        c = [K.coerce(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.K = K
        self.c = tuple(c)

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lc(self):
        return self.c[-1]

    def __add__(self, o):
        n = max(len(self.c), len(o.c))
        z = self.K.zero
        return KPoly(self.K, [(self.c[i] if i < len(self.c) else z) + (o.c[i] if i < len(o.c) else z)
                              for i in range(n)])

    def __neg__(self):
        return KPoly(self.K, [-x for x in self.c])

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, KPoly):
            if not self.c or not o.c:
                return KPoly(self.K, [])
            out = [self.K.zero] * (len(self.c) + len(o.c) - 1)
            for i, a in enumerate(self.c):
                for j, b in enumerate(o.c):
                    out[i + j] = out[i + j] + a * b
            return KPoly(self.K, out)
        s = self.K.coerce(o)
        return KPoly(self.K, [x * s for x in self.c])

    def divmod(self, o):
        rem = list(self.c)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        dq = len(rem) - len(o.c) + 1
        if dq <= 0:
            return KPoly(self.K, []), self
        quo = [self.K.zero] * dq
        inv = o.lc().inverse()
        for k in range(dq - 1, -1, -1):
            q = rem[k + len(o.c) - 1] * inv
            quo[k] = q
            for j, b in enumerate(o.c):
                rem[k + j] = rem[k + j] - q * b
        return KPoly(self.K, quo), KPoly(self.K, rem[: len(o.c) - 1])

    def monic(self):
        inv = self.lc().inverse()
        return self * inv

    def __eq__(self, o):
        return isinstance(o, KPoly) and self.c == o.c

    def __hash__(self):
        return hash(self.c)


def _kgcd(a: KPoly, b: KPoly) -> KPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


class TransExt:
    """The field K(π) for a number field K and a formal symbol ``name``."""

    def __init__(self, base: NumberField, name: str = "pi", value: float = math.pi):
        self.base = base
        self.name = name
        self.value = value

    @property
    def zero(self):
        return TElement(self, [], [1])

    @property
    def one(self):
        return TElement(self, [1], [1])

    @property
    def symbol(self):
        return TElement(self, [0, 1], [1])

    def coerce(self, x):
        if isinstance(x, TElement):
            if x.ext != self:
                raise InvalidInput("element of a different transcendental extension")
            return x
        return TElement(self, [self.base.coerce(x)], [1])

    def __eq__(self, o):
        return isinstance(o, TransExt) and self.base == o.base and self.name == o.name

    def __hash__(self):
        return hash((self.base, self.name))

    def __repr__(self):
        return f"TransExt({self.base!r}, {self.name})"


class TElement:
    __slots__ = ("ext", "num", "den")

    def __init__(self, ext: TransExt, num, den):
        K = ext.base
        n = num if isinstance(num, KPoly) else KPoly(K, num)
        d = den if isinstance(den, KPoly) else KPoly(K, den)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if n.is_zero():
            d = KPoly(K, [1])
        elif d.degree == 0:
            # constant denominator: no gcd needed
            if d.lc() != K.one:
                n, d = n * d.lc().inverse(), KPoly(K, [1])
        else:
            g = _kgcd(n, d)
            if g.degree > 0:
                n, d = n.divmod(g)[0], d.divmod(g)[0]
            inv = d.lc().inverse()
            n, d = n * inv, d * inv
        self.ext, self.num, self.den = ext, n, d

    def _o(self, o):
        if isinstance(o, TElement):
            return o
        if isinstance(o, (int, Fraction, NFElement)):
            return self.ext.coerce(o)
        return NotImplemented

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, o):
        o = self._o(o)
        if o is NotImplemented:
            return NotImplemented
        return (self.num * o.den) == (o.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, o):
        o = self._o(o)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den.degree == 0 and o.den.degree == 0:
            return TElement(self.ext, self.num + o.num, self.den)
        return TElement(self.ext, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return TElement(self.ext, -self.num, self.den)

    def __sub__(self, o):
        o = self._o(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._o(o)
        if o is NotImplemented:
            return o
        if self.den.degree == 0 and o.den.degree == 0:
            return TElement(self.ext, self.num * o.num, self.den)
        return TElement(self.ext, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return TElement(self.ext, self.den, self.num)

    def __truediv__(self, o):
        o = self._o(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._o(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.ext.one
        for _ in range(k):
            r = r * self
        return r

    def is_polynomial(self):
        return self.den.degree == 0

    def is_constant(self):
        return self.is_polynomial() and self.num.degree <= 0

    def __float__(self):
        t = self.ext.value
        ev = lambda p: sum(float(c) * t ** i for i, c in enumerate(p.c))
        return ev(self.num) / ev(self.den)

    def __repr__(self):
        def show(p):
            parts = []
            for i, c in enumerate(p.c):
                if c.is_zero():
                    continue
                mono = "" if i == 0 else (self.ext.name if i == 1 else f"{self.ext.name}^{i}")
                parts.append(f"({c})" + (f"*{mono}" if mono else ""))
            return " + ".join(parts) or "0"
        if self.den.degree == 0:
            return f"TElement({show(self.num)})"
        return f"TElement(({show(self.num)}) / ({show(self.den)}))"


def transcendental_coordinates(v, ext: TransExt) -> Matrix:
    """ℚ-coordinate rows of a K(π) vector over the basis {π^k θ^j}.

    The vector is first scaled by the common denominator, which does not
    change the line it spans.  Row index is k * deg(K) + j.
    """
    v = [ext.coerce(x) for x in v]
    den = KPoly(ext.base, [1])
    for x in v:
        g = _kgcd(den, x.den)
        den = (den * x.den).divmod(g)[0]
    polys = [(x.num * den).divmod(x.den)[0] for x in v]
    maxdeg = max((p.degree for p in polys), default=-1)
    d = ext.base.degree
    rows = []
    for k in range(maxdeg + 1):
        for j in range(d):
            rows.append([p.c[k].coords[j] if k < len(p.c) else Fraction(0) for p in polys])
    return Matrix(rows, ncols=len(v)) if rows else Matrix.zeros(0, len(v))
