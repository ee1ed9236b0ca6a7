from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from lcp_forge.errors import InvalidInput
from lcp_forge.linalg import (INFINITE, Lattice, Matrix, Poly, char_poly, cyclotomic, expand_factors,
                              factor_over_Z, factor_with_content, hnf, integer_kernel, is_irreducible,
                              is_squarefree, lattice_saturate, matrix_order, min_poly, poly_gcd, poly_xgcd,
                              quotient_order, snf, solve_integer, squarefree_decomposition)

X = sympy.Symbol("x")


def int_matrices(min_dim=1, max_dim=5, square=False, lo=-6, hi=6):
    def build(shape):
        m, n = shape
        return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
    dims = st.integers(min_dim, max_dim)
    shapes = dims.map(lambda n: (n, n)) if square else st.tuples(dims, dims)
    return shapes.flatmap(build)


def to_sympy_poly(p: Poly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])), X)


small_polys = st.lists(st.integers(-5, 5), min_size=1, max_size=7).filter(lambda c: c[-1] != 0).map(Poly)


# -- matrices --------------------------------------------------------------

def test_matrix_inverse_and_det():
    A = Matrix.rational([[2, 1], [7, 4]])
    assert A.det() == 1
    assert A @ A.inverse() == Matrix.identity(2)
    assert Matrix.rational([["1/2", 0], [0, 3]]).det() == Fraction(3, 2)


def test_singular_inverse_raises():
    with pytest.raises(Exception):
        Matrix.rational([[1, 2], [2, 4]]).inverse()


def test_json_round_trip():
    A = Matrix.rational([["1/3", -2], [5, "7/2"]])
    assert Matrix.from_json(A.to_json()) == A


@settings(max_examples=60, deadline=None)
@given(int_matrices(square=True))
def test_det_matches_sympy(rows):
    assert Matrix.rational(rows).det() == sympy.Matrix(rows).det()


# -- polynomials -----------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(int_matrices(square=True, max_dim=6))
def test_cayley_hamilton(rows):
    A = Matrix.rational(rows)
    assert char_poly(A).eval_matrix(A).is_zero()


@settings(max_examples=60, deadline=None)
@given(int_matrices(square=True, max_dim=5))
def test_char_poly_matches_sympy(rows):
    ours = char_poly(Matrix.rational(rows))
    theirs = sympy.Matrix(rows).charpoly(X)
    assert to_sympy_poly(ours) == sympy.Poly(theirs.as_expr(), X)


@settings(max_examples=40, deadline=None)
@given(int_matrices(square=True, max_dim=5, lo=-2, hi=2))
def test_min_poly_annihilates_and_divides(rows):
    A = Matrix.rational(rows)
    mp = min_poly(A)
    assert mp.eval_matrix(A).is_zero()
    assert mp.divides(char_poly(A))
    # no proper monic divisor of lower degree annihilates A
    for f, _ in factor_over_Z(mp):
        assert not (mp.exact_div(f)).eval_matrix(A).is_zero()


def test_min_poly_of_scalar_and_jordan():
    assert str(min_poly(Matrix.rational([[3, 0], [0, 3]]))) == "x - 3"
    assert str(min_poly(Matrix.rational([[3, 1], [0, 3]]))) == "x^2 - 6*x + 9"


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys)
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g
    if not g.is_zero():
        assert g.divides(a) and g.divides(b)


@settings(max_examples=60, deadline=None)
@given(small_polys)
def test_squarefree_decomposition_reassembles(p):
    parts = squarefree_decomposition(p)
    prod = Poly([1])
    for f, m in parts:
        assert is_squarefree(f)
        prod = prod * f ** m
    assert prod.monic() == p.monic()


# -- factorization ---------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(small_polys)
def test_factorization_matches_sympy(p):
    unit, fs = factor_with_content(p)
    assert expand_factors(unit, fs) == p
    _, theirs = sympy.factor_list(to_sympy_poly(p).as_expr(), X)
    ours = sorted((str(to_sympy_poly(f).as_expr()), m) for f, m in fs)
    ref = sorted((str(sympy.Poly(f, X).as_expr() * (1 if sympy.Poly(f, X).LC() > 0 else -1)), m)
                 for f, m in theirs if sympy.Poly(f, X).degree() > 0)
    assert ours == ref


def test_known_factorizations():
    assert [str(f) for f, _ in factor_over_Z(Poly([-1, 0, 0, 0, 1]))] == ["x - 1", "x + 1", "x^2 + 1"]
    assert is_irreducible(Poly([-5, 0, 1]))
    assert not is_irreducible(Poly([-4, 0, 1]))
    assert is_irreducible(cyclotomic(12))
    assert str(cyclotomic(6)) == "x^2 - x + 1"


def test_factor_zero_rejected():
    with pytest.raises(InvalidInput):
        factor_over_Z(Poly([]))


# -- normal forms ----------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(int_matrices(max_dim=5))
def test_hnf_reconstruction(rows):
    M = Matrix.rational(rows)
    H, U = hnf(M)
    assert U @ M == H
    assert abs(U.det()) == 1
    assert H.rank() == M.rank()


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_dim=5))
def test_snf_matches_sympy(rows):
    M = Matrix.rational(rows)
    D, U, V = snf(M)
    assert U @ M @ V == D
    ours = [D[i, i] for i in range(min(M.shape))]
    theirs = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    assert ours == [abs(theirs[i, i]) for i in range(min(M.shape))]


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_dim=4), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_integer_consistent_with_kernel(rows, xs):
    M = Matrix.rational(rows)
    x = xs[: M.ncols]
    b = list(M @ x)
    res = solve_integer(M, b)
    assert res.has_integer_solution
    assert list(M @ list(res.integer_solution)) == b
    for k in integer_kernel(M):
        assert all(v == 0 for v in M @ list(k))


def test_solve_integer_reports_rational_only():
    res = solve_integer(Matrix.rational([[2, 0], [0, 3]]), [1, 1])
    assert res.consistent and not res.has_integer_solution
    assert list(res.rational_solution) == [Fraction(1, 2), Fraction(1, 3)]
    assert not solve_integer(Matrix.rational([[1, 1], [1, 1]]), [0, 1]).consistent


# -- lattices --------------------------------------------------------------

def test_saturation_recovers_primitive_vectors():
    L = lattice_saturate([[2, 4, 6]], 3)
    assert L.rank == 1
    assert [list(v) for v in L.vectors()] == [[1, 2, 3]]


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_dim=4))
def test_saturation_is_idempotent(rows):
    n = len(rows[0])
    L = lattice_saturate(rows, n)
    assert lattice_saturate([list(v) for v in L.vectors()], n) == L
    assert L.rank == Matrix.rational(rows).rank()


def test_quotient_order():
    gamma = Lattice(2, [[2, 0], [0, 3]])
    full = Lattice.full(2)
    assert quotient_order(gamma, full, [1, 1]) == 6
    assert quotient_order(gamma, full, [2, 0]) == 1
    r = quotient_order(gamma, full, [1, 0])
    assert r == 2 and [r * 1, 0] in gamma


@pytest.mark.parametrize("rows, order", [
    ([[0, -1], [1, 0]], 4),
    ([[0, -1], [1, -1]], 3),
    ([[1, 0], [0, -1]], 2),
    ([[1, 1], [1, 2]], INFINITE),
    ([[1, 1], [0, 1]], INFINITE),
])
def test_matrix_order(rows, order):
    assert matrix_order(rows) == order
    if order != INFINITE:
        A = Matrix.rational(rows)
        assert A ** order == Matrix.identity(2)
        assert all(A ** j != Matrix.identity(2) for j in range(1, order))


def test_gcd_of_coprime():
    assert poly_gcd(Poly([-1, 1]), Poly([1, 1])).degree == 0
