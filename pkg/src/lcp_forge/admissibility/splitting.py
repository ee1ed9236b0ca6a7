"""The decomposition ℝ^p = E^q ⊕ E^{p−q} with its projector and scalar product."""

from __future__ import annotations

from fractions import Fraction

from ..errors import InvalidInput, NotSimilarity
from ..linalg.matrix import Matrix, QQ
from ..numfield.field import NFElement
from ..numfield.transcendental import TElement


def certified_sign(x) -> int:
    """Exact sign of a real scalar (rational, real number field, or π-free K(π) element)."""
    if isinstance(x, Fraction) or isinstance(x, int):
        return (x > 0) - (x < 0)
    if isinstance(x, NFElement):
        return x.sign()
    if isinstance(x, TElement):
        if x.is_constant():
            return certified_sign(x.num.c[0] if x.num.c else Fraction(0))
        raise InvalidInput("cannot certify the sign of an expression involving the formal symbol")
    raise InvalidInput(f"cannot certify the sign of {x!r}")


def leading_minors(G: Matrix):
    return [G.submatrix(range(k), range(k)).det() for k in range(1, G.nrows + 1)]


def is_positive_definite(G: Matrix) -> bool:
    return G == G.T and all(certified_sign(m) > 0 for m in leading_minors(G))


class Splitting:
    """Columns of ``basis_Eq`` span E^q, columns of ``basis_Epq`` span E^{p−q}."""

    def __init__(self, basis_Eq: Matrix, basis_Epq: Matrix, scalar_product: Matrix | None = None, field=None):
        K = field or basis_Eq.field
        self.field = K
        self.basis_Eq = basis_Eq if basis_Eq.field == K else basis_Eq.over(K)
        p, q = self.basis_Eq.shape
        if basis_Epq is None or basis_Epq.ncols == 0:
            basis_Epq = Matrix.zeros(p, 0, K)
        self.basis_Epq = basis_Epq if basis_Epq.field == K else basis_Epq.over(K)
        self.p, self.q = p, q
        if not 1 <= q <= p:
            raise InvalidInput("E^q must have dimension between 1 and p")
        if self.basis_Epq.nrows != p or self.basis_Epq.ncols != p - q:
            raise InvalidInput("E^{p-q} has the wrong dimension")
        S = self.change_of_basis
        if S.rank() != p:
            raise InvalidInput("E^q and E^{p-q} do not span the ambient space")
        self.scalar_product = (Matrix.identity(q, K) if scalar_product is None
                               else (scalar_product if scalar_product.field == K else scalar_product.over(K)))
        if self.scalar_product.shape != (q, q):
            raise InvalidInput("scalar product has the wrong size")
        if not is_positive_definite(self.scalar_product):
            raise InvalidInput("scalar product on E^q is not symmetric positive definite")
        Sinv = S.inverse()
        D = Matrix.diag([K.one] * q + [K.zero] * (p - q), K)
        self.projector = S @ D @ Sinv
        self._Sinv = Sinv

    @property
    def change_of_basis(self) -> Matrix:
        if self.basis_Epq.ncols == 0:
            return self.basis_Eq
        return self.basis_Eq.hstack(self.basis_Epq)

    def coordinates(self, v):
        """Coordinates of v in the adapted basis (E^q part first)."""
        return self._Sinv @ [self.field.coerce(x) for x in v]

    def Eq_component(self, v):
        return self.projector @ [self.field.coerce(x) for x in v]

    def _restrict(self, A: Matrix, basis: Matrix):
        """Coordinates of A·basis in the adapted basis; the rows outside ``basis`` must vanish."""
        AK = A.over(self.field) if A.field != self.field else A
        own = range(self.q) if basis is self.basis_Eq else range(self.q, self.p)
        coords = self._Sinv @ (AK @ basis)
        for j in range(basis.ncols):
            if any(coords[i, j] != 0 for i in range(self.p) if i not in own):
                return None, j
        if not basis.ncols:
            return Matrix.zeros(0, 0, self.field), None
        return coords.submatrix(list(own), list(range(basis.ncols))), None

    def restrict(self, A: Matrix) -> Matrix:
        """Matrix of A|_{E^q} in ``basis_Eq``; raises if E^q is not invariant."""
        R, bad = self._restrict(A, self.basis_Eq)
        if R is None:
            raise NotSimilarity(f"E^q is not invariant: column {bad} leaves it", witness={"column": bad})
        return R

    def preserved_by(self, A: Matrix):
        """(ok, witness) for A E^q ⊆ E^q and A E^{p−q} ⊆ E^{p−q}."""
        R, bad = self._restrict(A, self.basis_Eq)
        if R is None:
            return False, {"subspace": "E^q", "basis_vector": bad}
        if self.basis_Epq.ncols:
            R2, bad2 = self._restrict(A, self.basis_Epq)
            if R2 is None:
                return False, {"subspace": "E^{p-q}", "basis_vector": bad2}
        return True, None

    def commutes_with(self, M: Matrix) -> bool:
        MK = M.over(self.field) if M.field != self.field else M
        return MK @ self.projector == self.projector @ MK

    def to_json(self):
        fmt = lambda M: [[_fmt(x) for x in M.col(j)] for j in range(M.ncols)]
        return {"Eq": fmt(self.basis_Eq), "Epq": fmt(self.basis_Epq),
                "scalar_product": [[_fmt(x) for x in r] for r in self.scalar_product.rows]}


def _fmt(x):
    return str(x) if not isinstance(x, (NFElement, TElement)) else repr(x)


def identity_splitting(p: int, K=QQ) -> Splitting:
    return Splitting(Matrix.identity(p, K), None, None, K)
