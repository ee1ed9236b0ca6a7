"""Certified isolation of the complex roots of a squarefree polynomial.

Real roots are isolated by Sturm sequences and refined by bisection.
Non-real roots start from mpmath approximations; each approximation z gets the
inclusion disc |ζ − z| ≤ n·|p(z)/p'(z)|, evaluated in exact rational
arithmetic.  The disc always contains a root.  When the discs are pairwise
disjoint and avoid the real axis, and their number equals the number of
non-real roots, each disc contains exactly one root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ..errors import InvalidInput
from ..linalg.poly import Poly, is_squarefree
from .intervals import Interval, Rect, sqrt_bounds


@dataclass(frozen=True)
class RootBox:
    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction = Fraction(0)
    im_hi: Fraction = Fraction(0)

    @property
    def is_real(self) -> bool:
        return self.im_lo == 0 and self.im_hi == 0

    @property
    def width(self):
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    @property
    def rect(self) -> Rect:
        return Rect(Interval(self.re_lo, self.re_hi), Interval(self.im_lo, self.im_hi))

    @property
    def interval(self) -> Interval:
        return Interval(self.re_lo, self.re_hi)

    def center(self) -> complex:
        return complex(float((self.re_lo + self.re_hi) / 2), float((self.im_lo + self.im_hi) / 2))

    def disjoint_from(self, other: "RootBox") -> bool:
        return (self.re_hi < other.re_lo or other.re_hi < self.re_lo
                or self.im_hi < other.im_lo or other.im_hi < self.im_lo)

    def inside(self, other: "RootBox") -> bool:
        return (other.re_lo <= self.re_lo and self.re_hi <= other.re_hi
                and other.im_lo <= self.im_lo and self.im_hi <= other.im_hi)

    def to_json(self):
        if self.is_real:
            return {"lo": str(self.re_lo), "hi": str(self.re_hi)}
        return {"re_lo": str(self.re_lo), "re_hi": str(self.re_hi),
                "im_lo": str(self.im_lo), "im_hi": str(self.im_hi)}

    @classmethod
    def from_json(cls, d):
        if "lo" in d:
            return cls(Fraction(d["lo"]), Fraction(d["hi"]))
        return cls(Fraction(d["re_lo"]), Fraction(d["re_hi"]), Fraction(d["im_lo"]), Fraction(d["im_hi"]))

    def __repr__(self):
        if self.is_real:
            return f"RootBox([{float(self.re_lo)}, {float(self.re_hi)}])"
        return (f"RootBox([{float(self.re_lo)}, {float(self.re_hi)}] x "
                f"[{float(self.im_lo)}, {float(self.im_hi)}]i)")


# -- real roots ----------------------------------------------------------------

def sturm_sequence(p: Poly):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(seq, x):
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p: Poly, lo, hi, seq=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def cauchy_bound(p: Poly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def _nonroot_near(p, a, b):
    """A point strictly inside (a, b), near the midpoint, where p does not vanish."""
    w = b - a
    for k in (Fraction(1, 2), Fraction(3, 7), Fraction(4, 7), Fraction(2, 5), Fraction(3, 5)):
        m = a + k * w
        if p(m) != 0:
            return m
    raise AssertionError("no non-root split point found")


def isolate_real_roots(p: Poly):
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    B = cauchy_bound(p) + 1
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_real_roots(p, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(RootBox(a, b))
            continue
        m = _nonroot_near(p, a, b)
        stack.append((a, m))
        stack.append((m, b))
    out.sort(key=lambda r: r.re_lo)
    return out


def refine_real(p: Poly, box: RootBox, width) -> RootBox:
    """Bisect a real isolating interval down to the requested width."""
    a, b = box.re_lo, box.re_hi
    width = Fraction(width)
    if a == b:
        return box
    pa = p(a)
    if pa == 0:
        # the only root in (a, b] never sits at a; move a inward safely
        raise AssertionError("isolating interval has a root at its open end")
    while b - a >= width:
        m = (a + b) / 2
        pm = p(m)
        if pm == 0:
            return RootBox(m, m)
        if (pm > 0) == (pa > 0):
            a, pa = m, pm
        else:
            b = m
    return RootBox(a, b)


# -- complex roots -------------------------------------------------------------

def _gauss_eval(p: Poly, re: Fraction, im: Fraction):
    """p(re + i im) exactly as a pair of Fractions."""
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _mpf_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def inclusion_disc(p: Poly, re: Fraction, im: Fraction):
    """Rational radius r with some root of p inside |z - (re + i im)| <= r."""
    n = p.degree
    pr, pi_ = _gauss_eval(p, re, im)
    dr, di = _gauss_eval(p.derivative(), re, im)
    den = dr * dr + di * di
    if den == 0:
        return None
    r2 = n * n * (pr * pr + pi_ * pi_) / den
    return sqrt_bounds(r2, 128)[1]


def _approx_roots(p: Poly, dps: int):
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        return [(_mpf_fraction(mpmath.re(z)), _mpf_fraction(mpmath.im(z))) for z in roots]


def _nonreal_boxes(p: Poly, n_nonreal: int, dps: int):
    approx = _approx_roots(p, dps)
    approx.sort(key=lambda z: -abs(z[1]))
    chosen = approx[:n_nonreal]
    discs = []
    for re, im in chosen:
        r = inclusion_disc(p, re, im)
        if r is None or r >= abs(im):
            return None
        discs.append((re, im, r))
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            (a, b, r), (c, d, s) = discs[i], discs[j]
            if (r + s) ** 2 >= (a - c) ** 2 + (b - d) ** 2:
                return None
    boxes = [RootBox(re - r, re + r, im - r, im + r) for re, im, r in discs]
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if not boxes[i].disjoint_from(boxes[j]):
                return None
    return boxes


def root_isolation(p: Poly):
    """Disjoint isolating boxes, one per distinct complex root of squarefree p."""
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.degree < 1:
        return []
    if not is_squarefree(p):
        raise InvalidInput("root_isolation expects a squarefree polynomial")
    real = isolate_real_roots(p)
    n_nonreal = p.degree - len(real)
    if n_nonreal == 0:
        return real
    dps = 30
    while dps <= 960:
        boxes = _nonreal_boxes(p, n_nonreal, dps)
        if boxes is not None:
            boxes.sort(key=lambda b: (b.re_lo, b.im_lo))
            return real + boxes
        dps *= 2
    raise AssertionError("complex root certification did not converge")


def refine_box(p: Poly, box: RootBox, width) -> RootBox:
    """Shrink an isolating box to the requested width."""
    width = Fraction(width)
    if box.is_real:
        return refine_real(p, box, width)
    if box.width < width:
        return box
    z = box.center()
    dps = 30
    while dps <= 4000:
        with mpmath.workdps(dps):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
            dcoeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.derivative().coeffs)]
            w = mpmath.mpc(z)
            for _ in range(dps):
                step = mpmath.polyval(coeffs, w) / mpmath.polyval(dcoeffs, w)
                w -= step
                if abs(step) < mpmath.mpf(10) ** (-dps + 5):
                    break
            re, im = _mpf_fraction(mpmath.re(w)), _mpf_fraction(mpmath.im(w))
        r = inclusion_disc(p, re, im)
        if r is not None:
            cand = RootBox(re - r, re + r, im - r, im + r)
            if cand.inside(box) and 2 * r < width:
                return cand
        dps *= 2
    raise AssertionError("complex root refinement did not converge")


def roots_in_box(p: Poly, box: RootBox, max_rounds: int = 12):
    """Isolating boxes of the roots of squarefree p lying in ``box``.

    Raises InvalidInput when the question cannot be settled because a root
    sits on or hugs the box boundary.
    """
    iso = root_isolation(p)
    for _ in range(max_rounds):
        inside, undecided = [], False
        for b in iso:
            if b.inside(box):
                inside.append(b)
            elif not b.disjoint_from(box):
                undecided = True
        if not undecided:
            return inside
        iso = [refine_box(p, b, b.width / 16) if not (b.inside(box) or b.disjoint_from(box)) else b
               for b in iso]
    raise InvalidInput("a root lies on the boundary of the given box")
