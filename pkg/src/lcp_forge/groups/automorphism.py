"""Automorphisms of the trivial bundle ℝ^p × C → C in the affine model.

The base C is a product of primitives (Euclidean spaces, half-lines and
round 2-spheres) embedded in ambient coordinates x ∈ ℝ^n.  Every base
action used here is the restriction of an affine map x ↦ Bx + d with B
block diagonal along the factors, so a bundle automorphism is the affine map

    (a, x) ↦ (A a + c + L x,  B x + d)

with A ∈ GL_p(ℤ).  Composition and inversion are exact block-triangular
affine algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..errors import InvalidInput, UnsupportedComposition
from ..linalg.matrix import Matrix, QQ

EUCLIDEAN, HALFLINE, SPHERE2 = "euclidean", "halfline", "sphere2"


@dataclass(frozen=True)
class BaseFactor:
    kind: str
    coords: tuple

    @property
    def dim(self):
        return len(self.coords)

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, HALFLINE, SPHERE2):
            raise InvalidInput(f"unknown base factor {self.kind!r}")
        if self.kind == HALFLINE and len(self.coords) != 1:
            raise InvalidInput("a half-line factor has exactly one coordinate")
        if self.kind == SPHERE2 and len(self.coords) != 3:
            raise InvalidInput("a 2-sphere factor uses three ambient coordinates")
        if self.kind == EUCLIDEAN and len(self.coords) < 1:
            raise InvalidInput("a Euclidean factor needs at least one coordinate")


class BaseManifold:
    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise InvalidInput("the base needs at least one factor")
        names = [c for f in self.factors for c in f.coords]
        if len(set(names)) != len(names):
            raise InvalidInput("base coordinate names must be unique")
        self.coords = tuple(names)
        self.dim = len(names)
        offs, o = [], 0
        for f in self.factors:
            offs.append(o)
            o += f.dim
        self.offsets = tuple(offs)

    def index(self, name):
        try:
            return self.coords.index(name)
        except ValueError:
            raise InvalidInput(f"unknown base coordinate {name!r}") from None

    def positive_coords(self):
        return [f.coords[0] for f in self.factors if f.kind == HALFLINE]

    def check_point(self, x):
        """Raise InvalidInput when x leaves the base (t <= 0, off the sphere)."""
        if len(x) != self.dim:
            raise InvalidInput("base point has the wrong dimension")
        for f, o in zip(self.factors, self.offsets):
            if f.kind == HALFLINE and not x[o] > 0:
                raise InvalidInput(f"coordinate {f.coords[0]} must be positive")
            if f.kind == SPHERE2:
                r2 = sum(x[o + i] * x[o + i] for i in range(3))
                if r2 != 1:
                    raise InvalidInput("point is not on the unit sphere")

    def __eq__(self, o):
        return isinstance(o, BaseManifold) and self.factors == o.factors

    def __hash__(self):
        return hash(self.factors)

    def to_json(self):
        return [{"type": f.kind, "coords": list(f.coords)} for f in self.factors]

    @classmethod
    def from_json(cls, data):
        return cls(BaseFactor(d["type"], tuple(d["coords"])) for d in data)


class BaseAction:
    """Affine map x ↦ B x + d respecting the factor structure of the base."""

    def __init__(self, base: BaseManifold, B: Matrix, d, K=QQ, check=True):
        self.base = base
        self.K = K
        self.B = B if B.field == K else B.over(K)
        self.d = tuple(K.coerce(x) for x in d)
        if check:
            self._validate()

    def _validate(self):
        n = self.base.dim
        if self.B.shape != (n, n) or len(self.d) != n:
            raise InvalidInput("base action has the wrong size")
        # block diagonal along factors
        for f, o in zip(self.base.factors, self.base.offsets):
            for i in range(o, o + f.dim):
                for j in range(n):
                    if not (o <= j < o + f.dim) and self.B[i, j] != 0:
                        raise UnsupportedComposition("base action mixes factors")
            blk = self.B.submatrix(range(o, o + f.dim), range(o, o + f.dim))
            if f.kind == HALFLINE:
                s = blk[0, 0]
                if self.d[o] != 0:
                    raise UnsupportedComposition("half-line actions are scalings")
                if not _positive(s):
                    raise InvalidInput("half-line scaling must be positive")
            elif f.kind == SPHERE2:
                if any(self.d[o + i] != 0 for i in range(3)):
                    raise UnsupportedComposition("sphere actions are linear")
                if blk.T @ blk != Matrix.identity(3, self.K):
                    raise InvalidInput("sphere action is not orthogonal")
            elif blk.det() == 0:
                raise InvalidInput("Euclidean base action is not invertible")

    @classmethod
    def identity(cls, base, K=QQ):
        return cls(base, Matrix.identity(base.dim, K), [K.zero] * base.dim, K, check=False)

    def apply(self, x):
        y = self.B @ [self.K.coerce(v) for v in x]
        return tuple(a + b for a, b in zip(y, self.d))

    def compose(self, other: "BaseAction") -> "BaseAction":
        d = tuple(a + b for a, b in zip(self.B @ other.d, self.d))
        return BaseAction(self.base, self.B @ other.B, d, self.K, check=False)

    def inverse(self) -> "BaseAction":
        Bi = self.B.inverse()
        d = tuple(-x for x in Bi @ self.d)
        return BaseAction(self.base, Bi, d, self.K, check=False)

    def is_identity(self):
        return self.B.is_identity() and all(x == 0 for x in self.d)

    def __eq__(self, o):
        return isinstance(o, BaseAction) and self.B == o.B and self.d == o.d

    def __hash__(self):
        return hash((self.B, self.d))

    def fixes(self, x) -> bool:
        return all(a == self.K.coerce(b) for a, b in zip(self.apply(x), x))


def _positive(s):
    if isinstance(s, Fraction):
        return s > 0
    if hasattr(s, "sign"):
        return s.sign() > 0
    return float(s) > 0


class BundleAutomorphism:
    """(a, x) ↦ (A a + c + L x, B x + d)."""

    def __init__(self, linear, const, L, base_action: BaseAction, name: str = "", check=True):
        K = base_action.K
        self.K = K
        A = linear if isinstance(linear, Matrix) else Matrix.rational(linear)
        if check:
            if not A.is_square() or not A.is_integer():
                raise InvalidInput(f"linear part of {name or 'automorphism'} must be an integer matrix")
            if abs(A.det()) != 1:
                raise InvalidInput(f"linear part of {name or 'automorphism'} is not unimodular")
        self.A = A
        self.p = A.nrows
        self.c = tuple(K.coerce(x) for x in const)
        n = base_action.base.dim
        if L is None:
            L = Matrix.zeros(self.p, n, K)
        self.L = L if L.field == K else L.over(K)
        if check and (len(self.c) != self.p or self.L.shape != (self.p, n)):
            raise InvalidInput("translation part has the wrong size")
        self.base_action = base_action
        self.name = name

    @property
    def base(self):
        return self.base_action.base

    @property
    def AK(self):
        return self.A.over(self.K) if self.K != QQ else self.A

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, p, base, K=QQ, name="id"):
        return cls(Matrix.identity(p), [K.zero] * p, None, BaseAction.identity(base, K), name, check=False)

    @classmethod
    def translation(cls, v, base, K=QQ, name=""):
        return cls(Matrix.identity(len(v)), v, None, BaseAction.identity(base, K), name, check=False)

    # -- group operations -------------------------------------------------
    def compose(self, g: "BundleAutomorphism") -> "BundleAutomorphism":
        """self ∘ g."""
        if self.p != g.p or self.base != g.base:
            raise UnsupportedComposition("automorphisms live on different bundles")
        c = tuple(a + b + e for a, b, e in zip(self.A @ g.c, self.c, self.L @ g.base_action.d))
        L = self.A @ g.L + self.L @ g.base_action.B
        return BundleAutomorphism(self.A @ g.A, c, L, self.base_action.compose(g.base_action),
                                  name=_join(self.name, g.name), check=False)

    __matmul__ = compose

    def inverse(self) -> "BundleAutomorphism":
        Ai = self.A.inverse()
        AiK = Ai
        binv = self.base_action.inverse()
        # a = A^-1 (a' - c - L x),  x = B^-1 (x' - d)
        Lp = -(AiK @ self.L @ binv.B)
        c = tuple(-a - b for a, b in zip(AiK @ self.c, AiK @ (self.L @ binv.d)))
        return BundleAutomorphism(Ai, c, Lp, binv, name=f"{self.name}^-1" if self.name else "", check=False)

    def power(self, k: int) -> "BundleAutomorphism":
        result = BundleAutomorphism.identity(self.p, self.base, self.K)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result.compose(base)
        return result

    def apply(self, a, x):
        x = [self.K.coerce(v) for v in x]
        a2 = self.AK @ [self.K.coerce(v) for v in a]
        lx = self.L @ x
        return (tuple(u + v + w for u, v, w in zip(a2, self.c, lx)), self.base_action.apply(x))

    def translation_at(self, x):
        x = [self.K.coerce(v) for v in x]
        return tuple(u + v for u, v in zip(self.c, self.L @ x))

    def with_translation(self, c, L=None):
        return BundleAutomorphism(self.A, c, self.L if L is None else L, self.base_action, self.name, check=False)

    # -- predicates -------------------------------------------------------
    def is_pure_translation(self):
        return self.A.is_identity() and self.L.is_zero() and self.base_action.is_identity()

    def is_identity(self):
        return self.is_pure_translation() and all(x == 0 for x in self.c)

    def translation_is_constant(self):
        return self.L.is_zero()

    def __eq__(self, o):
        return (isinstance(o, BundleAutomorphism) and self.A == o.A and self.c == o.c
                and self.L == o.L and self.base_action == o.base_action)

    def __hash__(self):
        return hash((self.A, self.c))

    def __repr__(self):
        return (f"BundleAutomorphism({self.name or '?'}: A={[[str(x) for x in r] for r in self.A.rows]}, "
                f"c={[str(x) for x in self.c]})")

    def to_json(self):
        return {
            "name": self.name,
            "linear": self.A.to_json(),
            "translation": {"const": [str(x) for x in self.c],
                            "linear": {name: [str(self.L[i, j]) for i in range(self.p)]
                                       for j, name in enumerate(self.base.coords)
                                       if any(self.L[i, j] != 0 for i in range(self.p))}},
            "base": {"matrix": [[str(x) for x in r] for r in self.base_action.B.rows],
                     "translation": [str(x) for x in self.base_action.d]},
        }


def _join(a, b):
    if a and b:
        return f"{a}*{b}"
    return a or b
