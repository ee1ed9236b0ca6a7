"""Fixed points of finite-order affine maps on the fiber ℝ^p × {x}.

For A^m = I write X^m − 1 = (X − 1) R(X).  Then ℝ^p = V₁ ⊕ V₂ with
V₁ = ker(A − I), V₂ = ker R(A), and R(A)/m is the projector onto V₁ along
V₂.  The affine map a ↦ A a + b has a fixed point iff the V₁-component of
b vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..errors import InvalidInput, Unsupported
from ..linalg.lattice import INFINITE, matrix_order
from ..linalg.matrix import Matrix
from ..linalg.normal_forms import solve_integer
from ..numfield.field import NFElement
from .automorphism import BundleAutomorphism


def averaging_projector(A: Matrix, m: int) -> Matrix:
    n = A.nrows
    S = Matrix.zeros(n, n)
    P = Matrix.identity(n)
    for _ in range(m):
        S = S + P
        P = P @ A
    return S.scale(Fraction(1, m))


@dataclass
class AffineFixedPoint:
    order: int
    b1: tuple
    v2: tuple
    has_fixed_point: bool

    def to_json(self):
        return {"order": self.order, "b1": [str(x) for x in self.b1], "v2": [str(x) for x in self.v2],
                "has_fixed_point": self.has_fixed_point}


def affine_fixed_point_analysis(A, b, field=None) -> AffineFixedPoint:
    A = A if isinstance(A, Matrix) else Matrix.rational(A)
    m = matrix_order(A)
    if m == INFINITE:
        raise InvalidInput("linear part has infinite order")
    K = field
    if K is None:
        K = next((x.field for x in b if isinstance(x, NFElement)), None)
    P1 = averaging_projector(A, m)
    if K is not None:
        P1K, AK = P1.over(K), A.over(K)
        b = [K.coerce(x) for x in b]
    else:
        P1K, AK = P1, A
        b = [Fraction(x) if not isinstance(x, Fraction) else x for x in b]
    n = A.nrows
    b1 = P1K @ b
    b2 = [x - y for x, y in zip(b, b1)]
    IA = Matrix.identity(n, AK.field) - AK
    v = IA.solve(b2)
    if v is None:
        raise AssertionError("(I − A) must be invertible on ker R(A)")
    pv = P1K @ v
    v2 = tuple(x - y for x, y in zip(v, pv))
    return AffineFixedPoint(m, tuple(b1), v2, all(x == 0 for x in b1))


@dataclass
class FiberFixedPointResult:
    free: bool
    order: int
    translation: tuple
    b1: tuple
    witness: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"free": self.free, "order": self.order, "translation": [str(x) for x in self.translation],
                "b1": [str(x) for x in self.b1], "witness": self.witness}


def fiber_fixed_point_free(f: BundleAutomorphism, x) -> FiberFixedPointResult:
    """True iff no lift f + n (n ∈ ℤ^p) fixes a point of ℝ^p × {x}."""
    K = f.K
    x = [K.coerce(v) for v in x]
    if not f.base_action.fixes(x):
        raise InvalidInput("the base action does not fix the given point")
    m = matrix_order(f.A)
    if m == INFINITE:
        raise Unsupported("fixed-point analysis needs a finite-order linear part")
    tau = f.translation_at(x)
    P1 = averaging_projector(f.A, m)
    b1 = P1.over(K) @ list(tau)
    if not all(not isinstance(c, NFElement) or c.is_rational() for c in b1):
        # an irrational V₁-component never lies in the rational lattice P₁ ℤ^p
        return FiberFixedPointResult(True, m, tuple(tau), tuple(b1), {"reason": "irrational V1 component"})
    rb1 = [c.to_rational() if isinstance(c, NFElement) else Fraction(c) for c in b1]
    # lift f + n has a fixed point iff P₁(τ + n) = 0, i.e. m P₁ n = −m P₁ τ
    M = P1.scale(m)
    res = solve_integer(M, [-m * c for c in rb1])
    if res.has_integer_solution:
        n = res.integer_solution
        return FiberFixedPointResult(False, m, tuple(tau), tuple(b1),
                                     {"lift_correction": [str(c) for c in n],
                                      "reason": "this lift has a fixed point on the fiber"})
    return FiberFixedPointResult(True, m, tuple(tau), tuple(b1),
                                 {"reason": "V1 component of the translation is not in the projection of Z^p"})
