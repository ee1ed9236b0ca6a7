from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lcp_forge.errors import InvalidInput
from lcp_forge.linalg import Matrix, Poly, squarefree_part
from lcp_forge.numfield import (Interval, NumberField, TransExt, count_real_roots, kernel_over_K,
                                nf_embed, rational_coordinates, refine_box, root_isolation,
                                transcendental_coordinates)

Q5 = NumberField(["-5", "0", "1"], {"lo": "2", "hi": "3"}, "sqrt5")
CBRT2 = NumberField(["-2", "0", "0", "1"], {"lo": "1", "hi": "2"}, "c")

elements5 = st.tuples(st.fractions(max_denominator=20), st.fractions(max_denominator=20)).map(
    lambda c: Q5.element(list(c)))
elements_c = st.lists(st.integers(-9, 9), min_size=3, max_size=3).map(CBRT2.element)


def _mp_roots(p: Poly):
    return mpmath.polyroots([float(c) for c in reversed(p.coeffs)], maxsteps=200, extraprec=200)


# -- root isolation ---------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_isolation_matches_mpmath(coeffs):
    sq = squarefree_part(Poly(coeffs))
    boxes = root_isolation(sq)
    assert len(boxes) == sq.degree
    centers = [refine_box(sq, b, Fraction(1, 10 ** 10)).center() for b in boxes]
    roots = [complex(r) for r in _mp_roots(sq)]
    # nearest-centre matching must be a bijection
    match = [min(range(len(centers)), key=lambda i: abs(centers[i] - r)) for r in roots]
    assert sorted(match) == list(range(len(boxes)))
    assert all(abs(centers[i] - r) < 1e-6 for i, r in zip(match, roots))
    assert sum(b.is_real for b in boxes) == sum(abs(r.imag) < 1e-9 for r in roots)


def test_sturm_counts_on_half_open_intervals():
    p = Poly([-2, 0, 1])                              # ±√2
    assert count_real_roots(p, -2, 2) == 2
    assert count_real_roots(p, 0, 2) == 1
    q = Poly([0, -1, 1])                              # 0 and 1
    assert count_real_roots(q, 0, 1) == 1             # (0, 1]
    assert count_real_roots(q, -1, 0) == 1


def test_refinement_shrinks_and_keeps_root():
    p = Poly([-2, 0, 1])
    box = next(b for b in root_isolation(p) if b.is_real and b.interval.lo >= 0)
    fine = refine_box(p, box, Fraction(1, 10 ** 30))
    assert fine.width <= Fraction(1, 10 ** 30)
    assert fine.interval.lo ** 2 <= 2 <= fine.interval.hi ** 2


# -- fields -----------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(elements5, elements5, elements5)
def test_field_axioms_quadratic(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * a.inverse() == Q5.one


@settings(max_examples=60, deadline=None)
@given(elements_c, elements_c)
def test_field_axioms_cubic(a, b):
    assert a * b == b * a
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None)
@given(elements5, elements5)
def test_embedding_is_a_ring_map(a, b):
    ea, eb, eab = nf_embed(a), nf_embed(b), nf_embed(a * b)
    prod = ea * eb
    assert eab.overlaps(prod)
    assert abs(float(a * b) - float(a) * float(b)) < 1e-9 * max(1, abs(float(a)) * abs(float(b)))


def test_embedding_encloses_true_value():
    enc = nf_embed(Q5.gen, Fraction(1, 10 ** 40))
    with mpmath.workdps(60):
        s = mpmath.sqrt(5)
        assert mpmath.mpf(enc.lo.numerator) / enc.lo.denominator <= s
        assert s <= mpmath.mpf(enc.hi.numerator) / enc.hi.denominator


def test_choice_of_root_matters():
    neg = NumberField(["-5", "0", "1"], {"lo": "-3", "hi": "-2"}, "m")
    assert float(neg.gen) < 0 < float(Q5.gen)
    assert neg.gen.sign() == -1 and Q5.gen.sign() == 1


def test_rejects_bad_fields():
    with pytest.raises(InvalidInput):
        NumberField(["-4", "0", "1"], {"lo": "1", "hi": "3"})
    with pytest.raises(InvalidInput):
        NumberField(["-5", "0", "1"], {"lo": "-3", "hi": "3"})
    with pytest.raises(InvalidInput):
        NumberField(["-5", "0", "1"])


def test_kernel_over_field_gives_eigenvector():
    lam = (3 + Q5.gen) / 2
    A = Matrix.rational([[1, 1], [1, 2]]).over(Q5)
    M = A - Matrix.identity(2, Q5).scale(lam)
    ker = kernel_over_K(M, Q5)
    assert len(ker) == 1
    v = list(ker[0])
    assert list(A @ v) == [lam * x for x in v]


def test_rational_coordinates():
    v = [Q5.one, (1 + Q5.gen) / 2]
    R = rational_coordinates(v)
    assert R.tolist() == [[1, Fraction(1, 2)], [0, Fraction(1, 2)]] or \
        R.transpose().tolist() == [[1, Fraction(1, 2)], [0, Fraction(1, 2)]]


def test_transcendental_extension_arithmetic():
    E = TransExt(Q5)
    pi = E.symbol
    x = (pi + 1) / (pi - 1)
    assert x * (pi - 1) == pi + 1
    assert abs(float(x) - (mpmath.pi + 1) / (mpmath.pi - 1)) < 1e-12
    coords = transcendental_coordinates([pi, E.one], E)
    assert coords.rank() == 2


def test_interval_arithmetic_is_inclusive():
    a, b = Interval(Fraction(1), Fraction(2)), Interval(Fraction(-1), Fraction(3))
    assert (a * b).contains(Fraction(-2)) and (a * b).contains(Fraction(6))
    s = Interval(Fraction(2)).sqrt(96)
    assert s.lo ** 2 <= 2 <= s.hi ** 2 and s.width < Fraction(1, 10 ** 20)
