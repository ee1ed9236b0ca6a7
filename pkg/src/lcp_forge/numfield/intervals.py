"""Closed intervals and rectangles with exact rational endpoints.

Endpoints are Fractions; ``round_out`` snaps them outward to dyadic
rationals so repeated arithmetic does not blow up denominators.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, ceil, isqrt

from ..errors import InvalidInput


def _down(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(floor(x * s), s)


def _up(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(ceil(x * s), s)


def sqrt_bounds(x: Fraction, bits: int = 64):
    """Rational (lo, hi) with lo <= sqrt(x) <= hi, width about 2**-bits."""
    if x < 0:
        raise InvalidInput("square root of a negative number")
    s = 1 << bits
    n = x * s * s
    lo = isqrt(floor(n))
    hi = lo if lo * lo == n else lo + 1
    while hi * hi < n:
        hi += 1
    return Fraction(lo, s), Fraction(hi, s)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise InvalidInput(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @staticmethod
    def lift(x):
        return x if isinstance(x, Interval) else Interval(x)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def overlaps(self, other) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def is_positive(self):
        return self.lo > 0

    def is_negative(self):
        return self.hi < 0

    def round_out(self, bits: int = 96):
        return Interval(_down(self.lo, bits), _up(self.hi, bits))

    def __add__(self, o):
        o = Interval.lift(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-Interval.lift(o))

    def __rsub__(self, o):
        return Interval.lift(o) - self

    def __mul__(self, o):
        o = Interval.lift(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o):
        return self * Interval.lift(o).reciprocal()

    def __rtruediv__(self, o):
        return Interval.lift(o) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return Interval(1)
        if k % 2 == 1 or self.lo >= 0:
            a, b = self.lo ** k, self.hi ** k
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(self.hi ** k, self.lo ** k)
        return Interval(0, max(self.lo ** k, self.hi ** k))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def sqrt(self, bits: int = 64):
        if self.lo < 0:
            raise InvalidInput("square root of an interval with negative part")
        return Interval(sqrt_bounds(self.lo, bits)[0], sqrt_bounds(self.hi, bits)[1])

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def to_json(self):
        return {"lo": str(self.lo), "hi": str(self.hi)}


class Rect:
    """Complex rectangle re × im."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = Interval.lift(re)
        self.im = Interval.lift(0 if im is None else im)

    @staticmethod
    def lift(x):
        if isinstance(x, Rect):
            return x
        return Rect(x, 0)

    @property
    def width(self):
        return max(self.re.width, self.im.width)

    def __add__(self, o):
        o = Rect.lift(o)
        return Rect(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Rect(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-Rect.lift(o))

    def __rsub__(self, o):
        return Rect.lift(o) - self

    def __mul__(self, o):
        o = Rect.lift(o)
        return Rect(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> Interval:
        return self.re ** 2 + self.im ** 2

    def reciprocal(self):
        d = self.abs2()
        return Rect(self.re / d, -self.im / d)

    def __truediv__(self, o):
        return self * Rect.lift(o).reciprocal()

    def round_out(self, bits: int = 96):
        return Rect(self.re.round_out(bits), self.im.round_out(bits))

    def contains(self, z) -> bool:
        if isinstance(z, Rect):
            return self.re.contains(z.re) and self.im.contains(z.im)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def overlaps(self, other) -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def __complex__(self):
        return complex(float(self.re.mid), float(self.im.mid))

    def __repr__(self):
        return f"Rect({self.re!r}, {self.im!r})"

    def to_json(self):
        return {"re_lo": str(self.re.lo), "re_hi": str(self.re.hi),
                "im_lo": str(self.im.lo), "im_hi": str(self.im.hi)}
