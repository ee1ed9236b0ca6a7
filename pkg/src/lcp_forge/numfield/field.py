"""Number fields ℚ[x]/(P) with a distinguished complex embedding."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..errors import InvalidInput
from ..linalg.factor import is_irreducible
from ..linalg.matrix import Matrix, QQ, kernel
from ..linalg.poly import Poly, poly_xgcd
from .intervals import Interval, Rect
from .roots import RootBox, refine_box, root_isolation, roots_in_box


@lru_cache(maxsize=512)
def _isolation(coeffs):
    return tuple(root_isolation(Poly(coeffs)))


@lru_cache(maxsize=4096)
def _refined(coeffs, index, width):
    box = _isolation(coeffs)[index]
    return refine_box(Poly(coeffs), box, width)


class NumberField:
    """ℚ(θ) where θ is one chosen root of a monic irreducible polynomial.

    >>> K = NumberField([-5, 0, 1], {"lo": 2, "hi": 3})
    >>> (K.gen ** 2).is_rational()
    True
    """

    def __init__(self, min_poly, root_box=None, name: str = "theta"):
        P = min_poly if isinstance(min_poly, Poly) else Poly.from_json(min_poly)
        if P.degree < 1:
            raise InvalidInput("minimal polynomial must have positive degree")
        if not P.is_monic() or not P.is_integral():
            raise InvalidInput("minimal polynomial must be monic with integer coefficients")
        if P.degree > 1 and not is_irreducible(P):
            raise InvalidInput(f"{P} is not irreducible over ℤ")
        self.min_poly = P
        self.degree = P.degree
        self.name = name
        if root_box is None:
            if P.degree != 1:
                raise InvalidInput("a root box is required to select an embedding")
            root_box = RootBox(-P[0], -P[0])
        if isinstance(root_box, dict):
            root_box = RootBox.from_json(root_box)
        self.root_box = root_box
        inside = roots_in_box(P, root_box)
        if len(inside) != 1:
            raise InvalidInput(f"root box contains {len(inside)} roots of {P}, expected exactly one")
        iso = _isolation(P.coeffs)
        # identify the root by its index in the canonical isolation
        self._index = None
        for i, b in enumerate(iso):
            probe = b
            for _ in range(64):
                if probe.inside(root_box) or probe.disjoint_from(root_box):
                    break
                probe = refine_box(P, probe, probe.width / 16)
            if probe.inside(root_box):
                self._index = i
                break
        if self._index is None:
            raise InvalidInput("could not match the root box to an isolated root")
        self.is_real = iso[self._index].is_real

    # -- field object protocol --------------------------------------------
    @classmethod
    def rationals(cls):
        return cls(Poly([0, 1]), RootBox(Fraction(0), Fraction(0)))

    @property
    def zero(self):
        return NFElement(self, ())

    @property
    def one(self):
        return NFElement(self, (1,))

    @property
    def gen(self):
        if self.degree == 1:
            return NFElement(self, (-self.min_poly[0],))
        return NFElement(self, (0, 1))

    def coerce(self, x):
        if isinstance(x, NFElement):
            if x.field is not self and x.field != self:
                if x.is_rational():
                    return NFElement(self, (x.coords[0],))
                raise InvalidInput("element belongs to a different number field")
            return x
        return NFElement(self, (QQ.coerce(x),))

    def __call__(self, x):
        if isinstance(x, (list, tuple)):
            return NFElement(self, x)
        return self.coerce(x)

    def __eq__(self, other):
        if other is self:
            return True
        return isinstance(other, NumberField) and self.min_poly == other.min_poly and self._index == other._index

    def __hash__(self):
        return hash((self.min_poly.coeffs, self._index))

    def __repr__(self):
        return f"NumberField({self.min_poly}, root≈{self.root_approx()})"

    def root_approx(self):
        b = self.root_enclosure(Fraction(1, 10 ** 12))
        return float(b.re_lo) if b.is_real else b.center()

    def root_enclosure(self, width) -> RootBox:
        """Isolating box of the distinguished root with width < ``width``."""
        width = Fraction(width)
        # quantise the request so the cache sees a small set of keys
        k = 1
        while Fraction(1, 2 ** k) >= width:
            k += 1
        return _refined(self.min_poly.coeffs, self._index, Fraction(1, 2 ** k))

    def to_json(self):
        return {"min_poly": [str(c) for c in self.min_poly.coeffs], "root_box": self.root_box.to_json()}

    @classmethod
    def from_json(cls, d):
        return cls(d["min_poly"], d.get("root_box"), d.get("name", "theta"))

    def element(self, coords):
        return NFElement(self, coords)


class NFElement:
    """Element of a number field in the power basis 1, θ, …, θ^{d−1}."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        if type(coords) is tuple and len(coords) == field.degree and all(type(c) is Fraction for c in coords):
            self.field = field
            self.coords = coords
            return
        coords = [QQ.coerce(c) for c in coords]
        d = field.degree
        if len(coords) > d:
            coords = list((Poly(coords) % field.min_poly).coeffs)
        coords = coords + [Fraction(0)] * (d - len(coords))
        self.field = field
        self.coords = tuple(coords)

    @property
    def poly(self) -> Poly:
        return Poly(self.coords)

    def _other(self, o):
        if isinstance(o, NFElement):
            if o.field is not self.field and o.field != self.field:
                if o.is_rational():
                    return NFElement(self.field, (o.coords[0],))
                if self.is_rational():
                    return None
                raise InvalidInput("arithmetic between different number fields")
            return o
        if isinstance(o, (int, Fraction)):
            return NFElement(self.field, (o,))
        return NotImplemented

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInput("element is not rational")
        return self.coords[0]

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            c = self.coords
            return c[0] == o and all(x == 0 for x in c[1:])
        o2 = self._other(o) if not isinstance(o, str) else NotImplemented
        if o2 is NotImplemented:
            return NotImplemented
        if o2 is None:
            return False
        return self.coords == o2.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __add__(self, o):
        o2 = self._other(o)
        if o2 is NotImplemented:
            return NotImplemented
        if o2 is None:
            return o.__radd__(self)
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, o2.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, o):
        o2 = self._other(o)
        if o2 is NotImplemented:
            return NotImplemented
        if o2 is None:
            return (-o).__radd__(self)
        return NFElement(self.field, tuple(a - b for a, b in zip(self.coords, o2.coords)))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o2 = self._other(o)
        if o2 is NotImplemented:
            return NotImplemented
        if o2 is None:
            return o.__rmul__(self)
        if self.field.degree == 1:
            return NFElement(self.field, (self.coords[0] * o2.coords[0],))
        if self.field.degree == 2:
            # θ² = c1 θ + c0
            (a0, a1), (b0, b1) = self.coords, o2.coords
            P = self.field.min_poly
            hi = a1 * b1
            return NFElement(self.field, (a0 * b0 - hi * P[0], a0 * b1 + a1 * b0 - hi * P[1]))
        return NFElement(self.field, ((self.poly * o2.poly) % self.field.min_poly).coeffs)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.field.degree == 1 or self.is_rational():
            return NFElement(self.field, (1 / self.coords[0],))
        g, s, _ = poly_xgcd(self.poly, self.field.min_poly)
        # g is a nonzero constant since min_poly is irreducible
        return NFElement(self.field, (s * (1 / g[0])).coeffs)

    def __truediv__(self, o):
        o2 = self._other(o)
        if o2 is NotImplemented:
            return NotImplemented
        if o2 is None:
            return o.__rtruediv__(self)
        return self * o2.inverse()

    def __rtruediv__(self, o):
        o2 = self._other(o)
        if o2 is NotImplemented:
            return NotImplemented
        return o2 * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- embedding --------------------------------------------------------
    def enclosure(self, precision=Fraction(1, 10 ** 15)):
        """Certified Interval (real field) or Rect (complex field) of width < precision."""
        return nf_embed(self, precision)

    def sign(self) -> int:
        if not self.field.is_real:
            raise InvalidInput("sign of an element of a non-real field")
        if self.is_zero():
            return 0
        prec = Fraction(1, 2 ** 20)
        while True:
            iv = nf_embed(self, prec)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            prec /= 2 ** 20

    def __lt__(self, o):
        return (self - o).sign() < 0

    def __le__(self, o):
        return (self - o).sign() <= 0

    def __gt__(self, o):
        return (self - o).sign() > 0

    def __ge__(self, o):
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        if self.field.is_real:
            return float(nf_embed(self, Fraction(1, 2 ** 60)).mid)
        z = complex(nf_embed(self, Fraction(1, 2 ** 60)))
        if z.imag != 0:
            raise InvalidInput("non-real element has no float value")
        return z.real

    def __complex__(self):
        e = nf_embed(self, Fraction(1, 2 ** 60))
        return complex(float(e.mid)) if isinstance(e, Interval) else complex(e)

    def __repr__(self):
        return f"NFElement({self})"

    def __str__(self):
        name = self.field.name
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self):
        return [str(c) for c in self.coords]


class NFVector(tuple):
    """Tuple of elements of one number field."""

    def __new__(cls, entries, field: NumberField | None = None):
        entries = list(entries)
        if field is None:
            fields = {e.field for e in entries if isinstance(e, NFElement)}
            if len(fields) > 1:
                raise InvalidInput("vector entries from different fields")
            if not fields:
                raise InvalidInput("cannot infer the field of a rational vector")
            field = fields.pop()
        obj = super().__new__(cls, (field.coerce(e) for e in entries))
        obj.field = field
        return obj

    def scale(self, c):
        return NFVector([c * e for e in self], self.field)

    def __add__(self, o):
        return NFVector([a + b for a, b in zip(self, o)], self.field)

    def __sub__(self, o):
        return NFVector([a - b for a, b in zip(self, o)], self.field)

    def to_json(self):
        return [e.to_json() for e in self]


def nf_embed(e, precision=Fraction(1, 10 ** 15)):
    """Certified enclosure of the image of ``e`` under the distinguished embedding."""
    precision = Fraction(precision)
    if isinstance(e, (int, Fraction)):
        return Interval(e)
    K = e.field
    if e.is_rational():
        return Interval(e.coords[0]) if K.is_real else Rect(Interval(e.coords[0]), Interval(0))
    w = precision
    while True:
        box = K.root_enclosure(w)
        if K.is_real:
            t = box.interval
            acc = Interval(0)
            for c in reversed(e.coords):
                acc = acc * t + c
        else:
            t = box.rect
            acc = Rect(0)
            for c in reversed(e.coords):
                acc = acc * t + c
        if acc.width < precision:
            return acc
        w /= 2 ** 8


def kernel_over_K(M, field=None):
    """Exact kernel basis of a matrix with number-field entries."""
    rows = M.rows if isinstance(M, Matrix) else [list(r) for r in M]
    ncols = M.ncols if isinstance(M, Matrix) else (len(rows[0]) if rows else 0)
    fields = {x.field for r in rows for x in r if isinstance(x, NFElement) and not x.is_rational()}
    if field is not None:
        fields.add(field)
    if len(fields) > 1:
        raise InvalidInput("matrix mixes elements of different number fields")
    if not fields:
        fields = {x.field for r in rows for x in r if isinstance(x, NFElement)} or {None}
        K = next(iter(fields))
        if K is None:
            K = NumberField.rationals()
    else:
        K = fields.pop()
    rows = [[K.coerce(x) for x in r] for r in rows]
    out = []
    for v in kernel(rows, ncols, K):
        # normalise so the first nonzero entry is 1
        lead = next(x for x in v if not x.is_zero())
        inv = lead.inverse()
        out.append(NFVector([x * inv for x in v], K))
    return out


def rational_coordinates(v, field: NumberField | None = None) -> Matrix:
    """d × p rational matrix whose row j holds the θ^j coefficients of ``v``."""
    v = list(v)
    if field is None:
        fields = {x.field for x in v if isinstance(x, NFElement)}
        if len(fields) > 1:
            raise InvalidInput("vector mixes number fields")
        field = fields.pop() if fields else None
    if field is None:
        return Matrix([[QQ.coerce(x) for x in v]])
    entries = [field.coerce(x) for x in v]
    return Matrix([[e.coords[j] for e in entries] for j in range(field.degree)], ncols=len(v))
