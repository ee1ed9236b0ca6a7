"""Linear admissibility: semi-simplicity, integral block form, modulus classes,
the flat subspace E^q, rational hulls and similarity certificates."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from ..errors import InvalidInput, NotAdmissible, NotFound, NotSemisimple, NotSimilarity, Unsupported
from ..linalg.factor import factor_with_content
from ..linalg.lattice import Lattice, lattice_saturate
from ..linalg.matrix import Matrix, QQ, kernel, span_basis
from ..linalg.poly import Poly, char_poly, min_poly, poly_gcd, squarefree_decomposition, squarefree_part
from ..numfield.field import NFElement, NumberField, kernel_over_K, rational_coordinates
from ..numfield.intervals import Interval
from ..numfield.roots import RootBox, count_real_roots, refine_box, root_isolation, sturm_sequence
from ..numfield.transcendental import TElement, TransExt, transcendental_coordinates
from .similarity import Ratio, _abs, _plain, exact_sqrt, similarity_ratio_squared
from .splitting import Splitting, certified_sign


def _as_matrix(A) -> Matrix:
    A = A if isinstance(A, Matrix) else Matrix.rational(A)
    if not A.is_square():
        raise InvalidInput("expected a square matrix")
    return A


# -- semi-simplicity ------------------------------------------------------

@dataclass
class SemisimpleResult:
    semisimple: bool
    min_poly: Poly
    gcd: Poly

    def __bool__(self):
        return self.semisimple

    @property
    def repeated_factors(self):
        """Irreducible factors of the minimal polynomial with multiplicity > 1."""
        out = []
        for part, m in squarefree_decomposition(self.min_poly):
            if m > 1:
                out.extend((f, m) for f, _ in factor_with_content(part.primitive())[1])
        return out

    def to_json(self):
        return {"semisimple": self.semisimple, "min_poly": str(self.min_poly), "gcd_with_derivative": str(self.gcd),
                "repeated_factors": [{"factor": str(f), "multiplicity": m} for f, m in self.repeated_factors]}


def is_semisimple(A) -> SemisimpleResult:
    """Semi-simple over ℂ iff the minimal polynomial has no repeated root."""
    A = _as_matrix(A)
    mp = min_poly(A)
    g = poly_gcd(mp, mp.derivative())
    return SemisimpleResult(g.degree == 0, mp, g)


# -- integral block decomposition ----------------------------------------

@dataclass
class Block:
    matrix: Matrix
    poly: Poly           # irreducible factor P_k of χ_A
    multiplicity: int    # α_k in χ_A
    columns: list        # indices of the basis vectors in change_of_basis

    def to_json(self):
        return {"matrix": self.matrix.to_json(), "char_poly_factor": str(self.poly),
                "multiplicity": self.multiplicity}


@dataclass
class BlockDecomposition:
    change_of_basis: Matrix
    blocks: list

    @property
    def index(self):
        """Index of the lattice spanned by the basis in ℤ^p."""
        return abs(self.change_of_basis.det())

    def block_diagonal(self) -> Matrix:
        return Matrix.block_diag([b.matrix for b in self.blocks])

    def reassemble(self) -> Matrix:
        C = self.change_of_basis
        return C @ self.block_diagonal() @ C.inverse()

    def to_json(self):
        return {"change_of_basis": self.change_of_basis.to_json(), "index": str(self.index),
                "blocks": [b.to_json() for b in self.blocks]}


def _coords_in(basis_cols, vectors):
    """Rational coordinates of each vector in the given column basis."""
    B = Matrix.from_columns(basis_cols)
    out = []
    for v in vectors:
        x = B.solve(v)
        if x is None:
            raise AssertionError("vector left an invariant subspace")
        out.append(x)
    return out


def _cyclic_pieces(A: Matrix, lattice_basis, d):
    """Split an A-invariant saturated sublattice into saturated cyclic pieces of rank d."""
    pieces, span = [], []
    for v in lattice_basis:
        if span and Matrix.from_columns(span).solve(v) is not None:
            continue
        kry = [tuple(v)]
        for _ in range(d - 1):
            kry.append(tuple(A @ list(kry[-1])))
        sat = lattice_saturate(kry, A.nrows).vectors()
        pieces.append(sat)
        span.extend(sat)
    return pieces


def block_decompose(A) -> BlockDecomposition:
    """Integral basis in which A is block diagonal with irreducible blocks.

    Each kernel ker P_k(A) is saturated in ℤ^p; a kernel of multiplicity
    α > 1 is further cut into α cyclic pieces, each saturated again.
    """
    A = _as_matrix(A)
    ss = is_semisimple(A)
    if not ss:
        raise NotSemisimple("matrix is not semi-simple; its nilpotent part is nonzero",
                            witness=ss.to_json())
    _, factors = factor_with_content(char_poly(A))
    cols, blocks = [], []
    for f, mult in factors:
        K = f.eval_matrix(A)
        ker = [list(v) for v in kernel(K.rows, A.ncols)]
        sat = lattice_saturate(ker, A.nrows).vectors()
        pieces = [sat] if mult == 1 else _cyclic_pieces(A, sat, f.degree)
        for piece in pieces:
            images = [A @ list(v) for v in piece]
            coords = _coords_in(piece, images)
            B = Matrix.from_columns(coords)
            if not B.is_integer():
                raise AssertionError("block is not integral on a saturated invariant lattice")
            idx = list(range(len(cols), len(cols) + len(piece)))
            cols.extend(piece)
            blocks.append(Block(B, f, mult, idx))
    C = Matrix.from_columns(cols)
    dec = BlockDecomposition(C, blocks)
    if dec.reassemble() != A:
        raise AssertionError("block decomposition does not reproduce A")
    return dec


# -- modulus classes --------------------------------------------------------

def _power_sums(f: Poly, n):
    """p_1..p_n of the roots of monic f (Newton's identities)."""
    d = f.degree
    a = [f[i] for i in range(d + 1)]
    ps = [Fraction(d)]
    for k in range(1, n + 1):
        s = Fraction(0)
        for i in range(1, min(k - 1, d) + 1):
            s += a[d - i] * ps[k - i]
        if k <= d:
            s += k * a[d - k]
        ps.append(-s)
    return ps


def product_polynomial(f: Poly) -> Poly:
    """Monic polynomial whose roots are all α_i α_j (i, j over the roots of f).

    Every squared modulus |α|² = α ᾱ is among them.  Built from power sums:
    p_k of the products is p_k(f)².
    """
    f = f.monic()
    N = f.degree ** 2
    ps = _power_sums(f, N)
    pk = [None] + [ps[k] * ps[k] for k in range(1, N + 1)]
    e = [Fraction(1)]
    for k in range(1, N + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * pk[i]
        e.append(s / k)
    coeffs = [Fraction(0)] * (N + 1)
    for k in range(N + 1):
        coeffs[N - k] = (-1) ** k * e[k]
    return Poly(coeffs)


@dataclass
class RootRef:
    poly: Poly           # irreducible factor of χ_A
    factor_index: int
    box: RootBox

    @property
    def is_real(self):
        return self.box.is_real

    def refined(self, width) -> RootBox:
        return refine_box(self.poly, self.box, width)

    def squared_modulus(self, width) -> Interval:
        b = self.refined(width)
        return b.interval ** 2 if b.is_real else b.rect.abs2()

    def __complex__(self):
        return self.refined(Fraction(1, 10 ** 15)).center()

    def to_json(self):
        return {"factor": str(self.poly), "box": self.box.to_json()}


@dataclass
class ModulusClass:
    index: int
    members: list                 # RootRef
    modulus: Interval             # certified, width < 1e-12
    blocks: list                  # indices of the irreducible factors meeting the class
    exact: Optional[object] = None

    @property
    def has_real_root(self):
        return any(m.is_real for m in self.members)

    def to_json(self):
        return {"index": self.index, "modulus": self.modulus.to_json(), "approx": float(self.modulus),
                "exact": self._exact_json(),
                "blocks": self.blocks, "roots": [m.to_json() for m in self.members]}

    def _exact_json(self):
        if self.exact is None:
            return None
        K = self.exact.field
        return {"value": str(self.exact), "field": K.name, "min_poly": str(K.min_poly)}


class _SquaredModulusOracle:
    """Decides |α|² = |β|² through the real roots of the product polynomial."""

    def __init__(self, f: Poly):
        self.S = squarefree_part(product_polynomial(f))
        self.seq = sturm_sequence(self.S)

    def count(self, lo, hi):
        return count_real_roots(self.S, lo, hi, self.seq)

    def isolate(self, root: RootRef):
        """An interval (a, b] holding |α|² and no other root of S."""
        w = Fraction(1, 2 ** 8)
        while True:
            J = root.squared_modulus(w)
            pad = max(J.width, w)
            a, b = J.lo - pad, J.hi + pad
            if self.count(a, b) == 1:
                return a, b
            w /= 16

    def same(self, I1, I2):
        (a1, b1), (a2, b2) = I1, I2
        if b1 <= a2 or b2 <= a1:
            return False
        return self.count(min(a1, a2), max(b1, b2)) == 1


def modulus_classes(A, precision=Fraction(1, 10 ** 13)):
    """Roots of χ_A grouped by exact modulus, largest modulus first."""
    A = _as_matrix(A)
    _, factors = factor_with_content(char_poly(A))
    roots = []
    for k, (f, _) in enumerate(factors):
        for box in root_isolation(f):
            roots.append(RootRef(f, k, box))
    sqf = Poly([1])
    for f, _ in factors:
        sqf = sqf * f
    oracle = _SquaredModulusOracle(sqf)
    iso = [oracle.isolate(r) for r in roots]
    groups = []
    for i, r in enumerate(roots):
        for g in groups:
            if oracle.same(iso[g[0]], iso[i]):
                g.append(i)
                break
        else:
            groups.append([i])
    classes = []
    for g in groups:
        members = [roots[i] for i in g]
        rep = next((m for m in members if m.is_real), members[0])
        mod = rep.squared_modulus(Fraction(precision)).sqrt(96)
        exact = None
        if rep.is_real:
            K = NumberField(rep.poly, rep.box, "lam")
            exact = _abs(K.gen)
            if K.degree == 1:
                mod = Interval(exact.to_rational())
        classes.append(ModulusClass(0, members, mod, sorted({m.factor_index for m in members}), exact))
    classes.sort(key=lambda c: -c.modulus.mid)
    for i, c in enumerate(classes):
        c.index = i
    return classes


def irreducible_factors(A):
    return factor_with_content(char_poly(_as_matrix(A)))[1]


# -- flat subspace E^q ------------------------------------------------------

def _real_member_value(m: RootRef, K: NumberField):
    """Express a real class member as ±θ in the field generated by the representative."""
    for cand in (K.gen, -K.gen):
        if m.poly.degree != K.degree:
            break
        val = K.zero
        for c in reversed(m.poly.coeffs):
            val = val * cand + c
        if not val.is_zero():
            continue
        box = m.box
        enc = cand.enclosure(box.width / 4)
        while True:
            if enc.hi < box.re_lo or enc.lo > box.re_hi:
                break
            if box.re_lo < enc.lo and enc.hi <= box.re_hi:
                return cand
            box = m.refined(box.width / 4)
            enc = cand.enclosure(box.width / 4)
    raise Unsupported("real roots of one modulus class generate different number fields")


def invariant_form_2x2(R: Matrix) -> Optional[Matrix]:
    """Symmetric positive definite G with Rᵀ G R = |det R| G, when it is unique up to scale."""
    c = _abs(_plain(R.det()))
    unknowns = [(0, 0), (0, 1), (1, 1)]
    rows = []
    for i in range(2):
        for j in range(i, 2):
            row = []
            for (a, b) in unknowns:
                # coefficient of g_ab in (Rᵀ G R − c G)_ij
                s = R[a, i] * R[b, j] + (R[b, i] * R[a, j] if a != b else 0)
                if (i, j) == (a, b):
                    s = s - c
                row.append(s)
            rows.append(row)
    K = R.field
    ker = kernel(rows, 3, K)
    if len(ker) != 1:
        return None
    g11, g12, g22 = ker[0]
    if certified_sign(g11) < 0:
        g11, g12, g22 = -g11, -g12, -g22
    G = Matrix([[g11, g12], [g12, g22]], field=K)
    if certified_sign(G.det()) <= 0 or certified_sign(g11) <= 0:
        return None
    return G


def flat_subspace(A, cls=None, strict: bool = True, classes=None) -> Splitting:
    """E^q from the eigenvectors of one modulus class; E^{p−q} from the other root spaces.

    ``cls`` may be a ModulusClass or an index; by default the largest
    modulus class.  With ``strict`` every irreducible block must meet the
    class, as required of admissible data.
    """
    A = _as_matrix(A)
    ss = is_semisimple(A)
    if not ss:
        raise NotSemisimple("matrix is not semi-simple", witness=ss.to_json())
    classes = classes or modulus_classes(A)
    if cls is None:
        cls = classes[0]
    elif isinstance(cls, int):
        cls = classes[cls]
    factors = irreducible_factors(A)
    if strict:
        for k, (f, _) in enumerate(factors):
            if k not in cls.blocks:
                raise NotAdmissible("a block of A has no eigenvalue in the chosen modulus class",
                                    witness={"block_factor": str(f)})
    p = A.nrows
    real = [m for m in cls.members if m.is_real]
    cplx = [m for m in cls.members if not m.is_real]
    if real:
        rep = real[0]
        K = NumberField(rep.poly, rep.box, "lam")
    else:
        K = NumberField.rationals()
    AK = A.over(K)
    I = Matrix.identity(p, K)
    eq_cols, grams = [], []
    q_of_A = I
    for m in real:
        beta = _real_member_value(m, K)
        vecs = kernel_over_K(AK - I.scale(beta), K)
        eq_cols.extend(list(v) for v in vecs)
        grams.extend([None] * len(vecs))
        q_of_A = q_of_A @ (AK - I.scale(beta))
    seen = []
    for m in cplx:
        if m.poly in seen:
            continue
        seen.append(m.poly)
        if m.poly.degree != 2:
            raise Unsupported("complex class members of degree above 2 are not supported")
        Q = m.poly.eval_matrix(A)
        q_of_A = q_of_A @ Q.over(K)
        ker = [list(v) for v in kernel(Q.rows, p)]
        span = []
        for v in ker:
            if span and Matrix.from_columns(span).solve(v) is not None:
                continue
            Av = A @ v
            span.extend([v, list(Av)])
            eq_cols.extend([[K.coerce(x) for x in v], [K.coerce(x) for x in Av]])
            c0, c1 = m.poly[0], m.poly[1]
            R = Matrix([[0, -c0], [1, -c1]])
            grams.append(invariant_form_2x2(R))
    epq = span_basis(q_of_A.T.rows, K)
    if len(eq_cols) + len(epq) != p:
        raise AssertionError("E^q and E^{p−q} dimensions do not add up")
    # scalar product: orthonormal real eigenvectors, invariant forms on complex pairs
    blocks = []
    for g in grams:
        if g is None:
            blocks.append(Matrix.identity(1, K))
        else:
            blocks.append(g.over(K))
    G = Matrix.block_diag(blocks, K) if blocks else None
    BEq = Matrix.from_columns(eq_cols, field=K)
    BEpq = Matrix.from_columns([list(v) for v in epq], nrows=p, field=K) if epq else None
    S = Splitting(BEq, BEpq, G, K)
    ok, wit = S.preserved_by(A)
    if not ok:
        raise AssertionError(f"flat subspace is not invariant: {wit}")
    return S


# -- rational hull and density ---------------------------------------------

@dataclass
class RationalHull:
    lattice: Lattice
    rows: list
    symbolic: bool = False        # coordinates used the formal transcendental

    @property
    def dim(self):
        return self.lattice.rank

    @property
    def ambient_dim(self):
        return self.lattice.ambient_dim

    def is_full(self):
        return self.lattice.is_full()

    def contains_rows(self):
        return all(self.lattice.coordinates(r) is not None for r in self.rows)

    def to_json(self):
        d = {"dim": self.dim, "ambient_dim": self.ambient_dim,
             "basis": [[str(x) for x in v] for v in self.lattice.vectors()]}
        if self.symbolic:
            d["assumption"] = "pi and the field basis are treated as linearly independent over Q"
        return d


def _spanning_vectors(V):
    if isinstance(V, Splitting):
        return [list(V.basis_Eq.col(j)) for j in range(V.q)]
    if isinstance(V, Matrix):
        return [list(V.col(j)) for j in range(V.ncols)]
    return [list(v) for v in V]


def rational_hull(V, ambient_dim: int | None = None) -> RationalHull:
    """Smallest rational subspace containing span(V), as a saturated lattice."""
    vecs = _spanning_vectors(V)
    if ambient_dim is None:
        if not vecs:
            raise InvalidInput("ambient dimension required for an empty spanning set")
        ambient_dim = len(vecs[0])
    rows, symbolic = [], False
    for v in vecs:
        if len(v) != ambient_dim:
            raise InvalidInput("spanning vector dimension mismatch")
        ext = next((x.ext for x in v if isinstance(x, TElement)), None)
        if ext is not None:
            symbolic = True
            M = transcendental_coordinates(v, ext)
        else:
            M = rational_coordinates(v)
        rows.extend(list(r) for r in M.rows if any(x != 0 for x in r))
    hull = RationalHull(lattice_saturate(rows, ambient_dim), rows, symbolic)
    if not hull.contains_rows():
        raise AssertionError("rational hull does not contain its generators")
    return hull


def density_check(V, ambient_dim: int | None = None) -> bool:
    """True iff no proper rational subspace contains span(V)."""
    return rational_hull(V, ambient_dim).is_full()


# -- similarity certificates -------------------------------------------------

@dataclass
class SimilarityCertificate:
    scalar_product: Matrix
    ratios: list                   # Ratio per generator
    constructed: bool

    def to_json(self):
        return {"scalar_product": [[str(x) for x in r] for r in self.scalar_product.rows],
                "ratios": [r.to_json() for r in self.ratios], "constructed": self.constructed}


def _is_scalar(R: Matrix):
    return all(R[i, j] == (R[0, 0] if i == j else 0) for i in range(R.nrows) for j in range(R.ncols))


def _common_form(restricted):
    q = restricted[0].nrows
    K = restricted[0].field
    I = Matrix.identity(q, K)
    if all(_is_ok(R, I) for R in restricted):
        return I
    if q == 2:
        for R in restricted:
            if _is_scalar(R):
                continue
            G = invariant_form_2x2(R)
            if G is not None and all(_is_ok(S, G) for S in restricted):
                return G
    return None


def _is_ok(R, G):
    try:
        similarity_ratio_squared(R, G)
        return True
    except NotSimilarity:
        return False


def similarity_certificate(restricted, scalar_product: Matrix | None = None) -> SimilarityCertificate:
    """Verify (or construct) a scalar product on E^q for which every map is a similarity."""
    restricted = [R if isinstance(R, Matrix) else Matrix.rational(R) for R in restricted]
    if not restricted:
        raise InvalidInput("no generators given")
    q = restricted[0].nrows
    constructed = scalar_product is None
    if constructed:
        if q == 1 or all(_is_scalar(R) for R in restricted):
            G = Matrix.identity(q, restricted[0].field)
        else:
            G = _common_form(restricted)
            if G is None:
                raise NotFound("no invariant scalar product found for this family")
    else:
        G = scalar_product
    ratios = []
    for R in restricted:
        if q == 1:
            r = _abs(_plain(R[0, 0]))
            ratios.append(Ratio(r * r, r))
            continue
        c = _plain(similarity_ratio_squared(R, G))
        ratios.append(Ratio(c, exact_sqrt(c)))
    return SimilarityCertificate(G, ratios, constructed)


def commutant_check(M, splitting: Splitting) -> bool:
    """M commutes with the projector onto E^q along E^{p−q}."""
    return splitting.commutes_with(_as_matrix(M))


@dataclass
class ThetaResult:
    in_compact: bool
    ratio_squared: object
    det: object

    def to_json(self):
        return {"in_compact": self.in_compact, "ratio_squared": str(self.ratio_squared), "det": str(self.det)}


def theta_compact_check(M, splitting: Splitting) -> ThetaResult:
    """Is |det M|_{E^q}|^{−1/q} M|_{E^q} orthogonal for the scalar product on E^q?

    Equivalent exact test: Rᵀ G R = c G with c^q = det(R)².
    """
    R = splitting.restrict(_as_matrix(M))
    G = splitting.scalar_product
    d = R.det()
    try:
        c = similarity_ratio_squared(R, G)
    except NotSimilarity:
        return ThetaResult(False, None, d)
    return ThetaResult(c ** R.nrows == d * d, c, d)
