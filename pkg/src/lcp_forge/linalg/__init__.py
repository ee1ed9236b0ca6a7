"""Exact rational and integer linear algebra."""

from .matrix import Matrix, RatMatrix, QQ, RationalField, parse_rational
from .poly import (Poly, char_poly, min_poly, poly_gcd, poly_xgcd, poly_lcm, is_squarefree,
                   squarefree_decomposition, squarefree_part)
from .normal_forms import hnf, snf, solve_integer, integer_kernel, SolveResult
from .factor import factor_over_Z, factor_with_content, expand_factors, is_irreducible, cyclotomic
from .lattice import Lattice, lattice_saturate, quotient_order, matrix_order, INFINITE

__all__ = [
    "Matrix", "RatMatrix", "QQ", "RationalField", "parse_rational",
    "Poly", "char_poly", "min_poly", "poly_gcd", "poly_xgcd", "poly_lcm", "is_squarefree",
    "squarefree_decomposition", "squarefree_part",
    "hnf", "snf", "solve_integer", "integer_kernel", "SolveResult",
    "factor_over_Z", "factor_with_content", "expand_factors", "is_irreducible", "cyclotomic",
    "Lattice", "lattice_saturate", "quotient_order", "matrix_order", "INFINITE",
]
