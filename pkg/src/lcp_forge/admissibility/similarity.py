"""Exact similarity ratios: ρ² from Rᵀ G R = ρ² G and ρ itself when it is a field element."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import NotSimilarity
from ..linalg.matrix import Matrix
from ..numfield.field import NFElement, nf_embed
from ..numfield.intervals import Interval, sqrt_bounds
from ..numfield.transcendental import TElement
from .splitting import certified_sign


def _plain(x):
    """Drop a constant K(π) element to K."""
    if isinstance(x, TElement):
        if not x.is_constant():
            raise NotSimilarity("ratio depends on the formal symbol")
        return x.num.c[0] if x.num.c else x.ext.base.zero
    return x


def _abs(x):
    return -x if certified_sign(x) < 0 else x


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _quadratic_sqrt(y: NFElement):
    """Positive square root of y inside its quadratic field, if there is one.

    A root s satisfies s² − T s + N = 0 with N = ±√Norm(y) and
    T² = Tr(y) + 2N, which leaves finitely many rational candidates.
    """
    K = y.field
    if K.degree != 2:
        return None
    c0, c1 = -K.min_poly[0], -K.min_poly[1]      # θ² = c1 θ + c0
    a, b = (list(y.coords) + [Fraction(0)] * 2)[:2]
    norm = a * a + a * b * c1 - b * b * c0
    trace = 2 * a + b * c1
    rn = _rational_sqrt(norm)
    if rn is None:
        return None
    for N in (rn, -rn):
        rt = _rational_sqrt(trace + 2 * N)
        if rt is None or rt == 0:
            continue
        for T in (rt, -rt):
            s = (y + N) / T
            if s * s == y and s.sign() > 0:
                return s
    return None


def exact_sqrt(y):
    """√y exactly when it lies in the field of y, else None."""
    y = _plain(y)
    if isinstance(y, (int, Fraction)):
        return _rational_sqrt(Fraction(y))
    if y.is_rational():
        r = _rational_sqrt(y.to_rational())
        return y.field.coerce(r) if r is not None else None
    return _quadratic_sqrt(y)


@dataclass
class Ratio:
    """ρ(ω): exact when available, always with its exact square."""

    squared: object
    exact: object = None

    def enclosure(self, precision=Fraction(1, 10 ** 15)) -> Interval:
        if self.exact is not None:
            return nf_embed(self.exact, precision) if isinstance(self.exact, NFElement) else Interval(self.exact)
        sq = nf_embed(self.squared, precision * precision) if isinstance(self.squared, NFElement) \
            else Interval(self.squared)
        return Interval(sqrt_bounds(sq.lo)[0], sqrt_bounds(sq.hi)[1])

    def is_one(self):
        return self.squared == 1

    def __float__(self):
        return float(self.exact) if self.exact is not None else math.sqrt(float(self.squared))

    def __mul__(self, o: "Ratio"):
        ex = self.exact * o.exact if self.exact is not None and o.exact is not None else None
        return Ratio(self.squared * o.squared, ex)

    def inverse(self) -> "Ratio":
        return Ratio(1 / self.squared, 1 / self.exact if self.exact is not None else None)

    def __eq__(self, o):
        return isinstance(o, Ratio) and self.squared == o.squared

    def __hash__(self):
        return hash(str(self.squared))

    def __str__(self):
        return str(self.exact) if self.exact is not None else f"sqrt({self.squared})"

    def to_json(self):
        return {"value": str(self), "squared": str(self.squared), "exact": self.exact is not None,
                "approx": float(self)}


def similarity_ratio_squared(R: Matrix, G: Matrix):
    """c with Rᵀ G R = c G, or raise NotSimilarity with the first bad pair."""
    H = R.T @ G @ R
    q = R.nrows
    i0 = 0
    c = H[i0, i0] / G[i0, i0]
    for i in range(q):
        for j in range(q):
            if H[i, j] != c * G[i, j]:
                raise NotSimilarity("restriction is not a similarity", witness={"pair": [i, j]})
    return c
