"""Conjugation by fiber sections φ(a, x) = (a + s(x), x).

Conjugated generators usually have polynomial (not affine) translation
parts, so they are carried as :class:`ExprAutomorphism` objects whose
translation is a vector of expressions in the base coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..errors import InvalidInput, UnsupportedComposition
from ..expr import Expr, parse
from ..linalg.matrix import Matrix
from .automorphism import BaseAction, BundleAutomorphism
from .spec import GroupSpec, parse_token


def _base_substitution(action: BaseAction):
    """coord name -> Expr of the image coordinate."""
    coords = action.base.coords
    out = {}
    for i, name in enumerate(coords):
        e = Expr.const(action.d[i])
        for j, other in enumerate(coords):
            c = action.B[i, j]
            if c != 0:
                e = e + Expr.var(other) * c
        out[name] = e
    return out


class ExprAutomorphism:
    """(a, x) ↦ (A a + τ(x), ω(x)) with τ a vector of expressions."""

    def __init__(self, A: Matrix, tau, base_action: BaseAction, name=""):
        self.A = A
        self.tau = tuple(Expr.lift(t) for t in tau)
        self.base_action = base_action
        self.name = name
        self.K = base_action.K

    @classmethod
    def from_automorphism(cls, f: BundleAutomorphism):
        coords = f.base.coords
        tau = []
        for i in range(f.p):
            e = Expr.const(f.c[i])
            for j, name in enumerate(coords):
                if f.L[i, j] != 0:
                    e = e + Expr.var(name) * f.L[i, j]
            tau.append(e)
        return cls(f.A, tau, f.base_action, f.name)

    @property
    def p(self):
        return self.A.nrows

    def _A_times(self, vec):
        out = []
        for i in range(self.p):
            e = Expr()
            for j in range(self.p):
                if self.A[i, j] != 0:
                    e = e + vec[j] * self.A[i, j]
            out.append(e)
        return out

    def compose(self, g: "ExprAutomorphism") -> "ExprAutomorphism":
        """self ∘ g: translation A_f τ_g(x) + τ_f(g(x))."""
        if self.base_action.base != g.base_action.base:
            raise UnsupportedComposition("different base manifolds")
        sub = _base_substitution(g.base_action)
        tau = [a + b.substitute(sub) for a, b in zip(self._A_times(g.tau), self.tau)]
        return ExprAutomorphism(self.A @ g.A, tau, self.base_action.compose(g.base_action))

    def inverse(self) -> "ExprAutomorphism":
        binv = self.base_action.inverse()
        sub = _base_substitution(binv)
        Ai = self.A.inverse()
        inv = ExprAutomorphism(Ai, [Expr()] * self.p, binv)
        moved = [-t.substitute(sub) for t in self.tau]
        return ExprAutomorphism(Ai, inv._A_times(moved), binv)

    def power(self, k):
        r = ExprAutomorphism(Matrix.identity(self.p), [Expr()] * self.p,
                             BaseAction.identity(self.base_action.base, self.K))
        b = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            r = r.compose(b)
        return r

    def translation_is_constant(self):
        return all(t.is_constant() for t in self.tau)

    def is_pure_translation(self):
        return self.A.is_identity() and self.base_action.is_identity()

    def constant_translation(self):
        if not self.translation_is_constant():
            raise InvalidInput("translation is not constant")
        return tuple(t.constant_value() if not t.is_zero() else 0 for t in self.tau)

    def to_automorphism(self) -> BundleAutomorphism | None:
        """Back to the affine model when every translation entry has degree ≤ 1."""
        coords = self.base_action.base.coords
        K = self.K
        c, L = [], [[K.zero] * len(coords) for _ in range(self.p)]
        for i, t in enumerate(self.tau):
            c.append(t.terms.get((), K.zero))
            for key, coef in t.terms.items():
                if key == ():
                    continue
                if len(key) != 1 or key[0][1] != 1:
                    return None
                L[i][coords.index(key[0][0])] = coef
        return BundleAutomorphism(self.A, c, Matrix(L, ncols=len(coords), field=K), self.base_action,
                                  self.name, check=False)

    def evaluate_translation(self, point: dict):
        return [t.evaluate(point) for t in self.tau]

    def to_json(self):
        return {"name": self.name, "linear": self.A.to_json(), "translation": [str(t) for t in self.tau]}


def evaluate_expr_word(word, gens: dict, base, K, p) -> ExprAutomorphism:
    r = ExprAutomorphism(Matrix.identity(p), [Expr()] * p, BaseAction.identity(base, K))
    for tok in word:
        name, e = parse_token(tok)
        if name not in gens:
            raise InvalidInput(f"unknown generator {name!r}")
        r = r.compose(gens[name].power(e))
    return r


def parse_section(s, spec: GroupSpec):
    consts = {spec.field.name: spec.field.gen}
    if len(s) != spec.p:
        raise InvalidInput(f"a section has {spec.p} components")
    out = [parse(x, consts) if isinstance(x, str) else Expr.lift(x) for x in s]
    for e in out:
        for v in e.variables():
            if v not in spec.base.coords and v != "pi":
                raise InvalidInput(f"section uses unknown coordinate {v!r}")
    return out


@dataclass
class ConjugationResult:
    generators: dict                       # name -> ExprAutomorphism
    constant: dict                         # name -> bool
    residuals: dict                        # name -> max numeric spread at samples
    affine: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"generators": {n: g.to_json() for n, g in self.generators.items()},
                "constant": self.constant, "residuals": self.residuals}


def conjugate_by_section(spec: GroupSpec, s, samples=None) -> ConjugationResult:
    """φ⁻¹ ω̃ φ for every generator, with translation A s(x) + τ(x) − s(ω(x))."""
    sec = parse_section(s, spec) if not all(isinstance(e, Expr) for e in s) else list(s)
    out, const, resid, affine = {}, {}, {}, {}
    for name, g in spec.generators.items():
        eg = ExprAutomorphism.from_automorphism(g)
        moved = [e.substitute(_base_substitution(g.base_action)) for e in sec]
        tau = [a + b - c for a, b, c in zip(eg._A_times(sec), eg.tau, moved)]
        h = ExprAutomorphism(g.A, tau, g.base_action, name)
        out[name] = h
        const[name] = h.translation_is_constant()
        affine[name] = h.to_automorphism()
        spread = 0.0
        if samples:
            vals = [h.evaluate_translation(pt) for pt in samples]
            for v in vals[1:]:
                spread = max(spread, max(abs(a - b) for a, b in zip(v, vals[0])))
        resid[name] = spread
    return ConjugationResult(out, const, resid, affine)


@dataclass
class ConstantTranslationObstruction:
    commutator: list
    nonzero: bool
    linear_parts_identity: bool
    sections_tried: int

    @property
    def obstructed(self):
        return self.nonzero and self.linear_parts_identity

    def to_json(self):
        return {"commutator_translation": self.commutator, "nonzero": self.nonzero,
                "linear_parts_identity": self.linear_parts_identity, "sections_tried": self.sections_tried,
                "obstructed": self.obstructed}


def constant_translation_obstruction(spec: GroupSpec, pair, sections) -> ConstantTranslationObstruction:
    """Commutator of two conjugated generators after each section.

    If both generators have identity linear part and their conjugates had
    constant translations they would commute; a nonzero commutator that is
    the same for every section certifies that no section works.
    """
    a, b = pair
    word = [f"{a}^-1", f"{b}^-1", a, b]
    values = []
    for s in sections:
        conj = conjugate_by_section(spec, s).generators
        w = evaluate_expr_word(word, conj, spec.base, spec.field, spec.p)
        if not w.is_pure_translation() or not w.translation_is_constant():
            raise InvalidInput("commutator is not a constant translation")
        values.append(tuple(w.constant_translation()))
    if len(set(values)) != 1:
        raise AssertionError("commutator changed under conjugation")
    ident = spec.generators[a].A.is_identity() and spec.generators[b].A.is_identity()
    val = values[0]
    return ConstantTranslationObstruction([str(x) for x in val], any(x != 0 for x in val), ident, len(sections))
