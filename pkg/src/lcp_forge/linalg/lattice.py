"""Integer lattices in HNF and order computations."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from ..errors import InvalidInput
from .factor import cyclotomic_index, factor_with_content
from .matrix import Matrix, kernel
from .normal_forms import hnf, integer_kernel, solve_integer
from .poly import is_squarefree, min_poly


class Lattice:
    """A sublattice of ℤ^n stored by its row HNF basis (zero rows dropped)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, generators=()):
        self.ambient_dim = ambient_dim
        gens = [tuple(Fraction(x) for x in g) for g in generators]
        if any(len(g) != ambient_dim for g in gens):
            raise InvalidInput("generator dimension mismatch")
        if gens:
            H, _ = hnf(gens)
            rows = [H.row(i) for i in range(H.nrows) if any(x != 0 for x in H.row(i))]
        else:
            rows = []
        self.basis = Matrix(rows, ncols=ambient_dim)

    @classmethod
    def full(cls, n: int):
        return cls(n, Matrix.identity(n).rows)

    @property
    def rank(self) -> int:
        return self.basis.nrows

    def vectors(self):
        return list(self.basis.rows)

    def is_full(self):
        return self.rank == self.ambient_dim

    def __contains__(self, v) -> bool:
        v = [Fraction(x) for x in v]
        if len(v) != self.ambient_dim:
            raise InvalidInput("vector dimension mismatch")
        if any(x.denominator != 1 for x in v):
            return False
        if self.rank == 0:
            return all(x == 0 for x in v)
        return solve_integer(self.basis.T, v).has_integer_solution

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(v in self for v in other.vectors())

    def coordinates(self, v):
        """Rational coordinates of ``v`` in the HNF basis, or None."""
        if self.rank == 0:
            return () if all(Fraction(x) == 0 for x in v) else None
        return self.basis.T.solve([Fraction(x) for x in v])

    def index_in(self, other: "Lattice") -> int:
        """|other / self| for full-rank lattices self ⊆ other."""
        if not (self.is_full() and other.is_full()):
            raise InvalidInput("index requires full-rank lattices")
        return abs(self.basis.det() / other.basis.det())

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Lattice(dim={self.ambient_dim}, basis={[[str(x) for x in r] for r in self.basis.rows]})"

    def to_json(self):
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}


def lattice_saturate(vectors, ambient_dim: int | None = None) -> Lattice:
    """HNF basis of ℤ^n ∩ span_ℚ(vectors)."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise InvalidInput("ambient dimension required for an empty spanning set")
        ambient_dim = len(vectors[0])
    if any(len(v) != ambient_dim for v in vectors):
        raise InvalidInput("spanning vector dimension mismatch")
    if not vectors or all(all(x == 0 for x in v) for v in vectors):
        return Lattice(ambient_dim)
    # span(V) = {x : N x = 0} for N a basis of the orthogonal complement
    normals = kernel([list(v) for v in vectors], ambient_dim)
    if not normals:
        return Lattice.full(ambient_dim)
    return Lattice(ambient_dim, integer_kernel(Matrix(normals, ncols=ambient_dim)))


def quotient_order(gamma: Lattice, gamma_prime: Lattice, v) -> int:
    """Least r >= 1 with r*v in gamma, for gamma ⊆ gamma_prime full rank."""
    if gamma.ambient_dim != gamma_prime.ambient_dim:
        raise InvalidInput("lattices live in different dimensions")
    if not gamma.is_full():
        raise InvalidInput("quotient_order needs a full-rank lattice")
    if not gamma_prime.contains_lattice(gamma):
        raise InvalidInput("first lattice is not contained in the second")
    if v not in gamma_prime:
        raise InvalidInput("vector does not lie in the larger lattice")
    coords = gamma.coordinates(v)
    return lcm(*(Fraction(c).denominator for c in coords)) if coords else 1


INFINITE = "infinite"


def matrix_order(A):
    """Order of A in GL_p(ℤ): a positive int, or the string ``"infinite"``.

    A has finite order iff its minimal polynomial is squarefree and every
    irreducible factor is cyclotomic; the order is then the lcm of their
    indices.
    """
    if not isinstance(A, Matrix):
        A = Matrix.rational(A)
    if not A.is_square() or not A.is_integer():
        raise InvalidInput("matrix_order expects a square integer matrix")
    if abs(A.det()) != 1:
        raise InvalidInput("matrix is not unimodular")
    mp = min_poly(A)
    if not is_squarefree(mp):
        return INFINITE
    k = 1
    for f, _ in factor_with_content(mp)[1]:
        n = cyclotomic_index(f)
        if n is None:
            return INFINITE
        k = lcm(k, n)
    if A ** k != Matrix.identity(A.nrows):
        raise AssertionError("cyclotomic order certificate failed")
    return k
