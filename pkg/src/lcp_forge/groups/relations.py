"""Relation verification modulo ℤ^p and the splitting obstruction for G → Ω."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from ..errors import InvalidInput, Unsupported
from ..linalg.matrix import Matrix
from ..linalg.normal_forms import SolveResult, solve_integer
from ..numfield.field import NFElement
from .automorphism import BundleAutomorphism
from .spec import GroupSpec, Relation, evaluate_word


def _as_rational(x) -> Optional[Fraction]:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, NFElement) and x.is_rational():
        return x.to_rational()
    return None


def _is_integral(vec):
    for x in vec:
        q = _as_rational(x)
        if q is None or q.denominator != 1:
            return False
    return True


def _fmt(v):
    return [str(x) for x in v]


def expected_automorphism(rel: Relation, spec: GroupSpec, generators=None) -> BundleAutomorphism:
    if rel.expected_kind == "word":
        return evaluate_word(rel.expected, spec, generators)
    if rel.expected_kind == "translation":
        return BundleAutomorphism.translation(rel.expected, spec.base, spec.field)
    return spec.identity()


def relation_residual(rel: Relation, spec: GroupSpec, generators=None) -> BundleAutomorphism:
    """word ∘ expected⁻¹; a torus-level relation leaves an integral pure translation."""
    lhs = evaluate_word(rel.word, spec, generators)
    return lhs.compose(expected_automorphism(rel, spec, generators).inverse())


@dataclass
class RelationResult:
    name: str
    word: list
    torus_pass: bool
    strict_pass: bool
    residual: Optional[list]
    witness: dict = dc_field(default_factory=dict)

    @property
    def passed(self):
        """The verdict the relation was declared with: torus-level or exact."""
        return self.torus_pass if self.witness.get("mode") == "torus" else self.strict_pass

    def to_json(self):
        return {"name": self.name, "word": self.word, "torus": self.torus_pass, "strict": self.strict_pass,
                "residual": self.residual, "witness": self.witness}


def verify_relation(rel: Relation, spec: GroupSpec, generators=None) -> RelationResult:
    res = relation_residual(rel, spec, generators)
    name = rel.name or " ".join(rel.word)
    mode = "torus" if rel.torus else "strict"
    if not res.is_pure_translation():
        w = {"mode": mode, "reason": "residual is not a fiber translation",
             "linear_residual": res.A.to_json(),
             "base_is_identity": res.base_action.is_identity(),
             "translation_depends_on_base": not res.L.is_zero()}
        return RelationResult(name, list(rel.word), False, False, None, w)
    r = list(res.c)
    torus = _is_integral(r)
    declared = rel.correction if rel.correction is not None else tuple(Fraction(0) for _ in r)
    strict = all(a == b for a, b in zip(r, declared))
    w = {"mode": mode, "declared_correction": _fmt(declared)}
    if not torus:
        w["non_integral"] = [i for i, x in enumerate(r) if _as_rational(x) is None
                             or _as_rational(x).denominator != 1]
    return RelationResult(name, list(rel.word), torus, strict, _fmt(r), w)


def verify_all(spec: GroupSpec, generators=None):
    return [verify_relation(r, spec, generators) for r in spec.relations]


# -- splitting obstruction ------------------------------------------------

@dataclass
class SplitResult:
    exists: bool
    lifts: Optional[dict]
    system: Matrix
    rhs: list
    solve: Optional[SolveResult]
    witness: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"exists": self.exists,
                "lifts": {k: _fmt(v) for k, v in self.lifts.items()} if self.lifts else None,
                "system": self.system.to_json(), "rhs": _fmt(self.rhs),
                "solve": self.solve.to_json() if self.solve else None,
                "witness": self.witness}


def _shifted(spec: GroupSpec, z):
    """Lifts g̃ = τ_{−z_g} ∘ g for an integer vector z stacked per generator."""
    out = {}
    p = spec.p
    for k, (name, g) in enumerate(spec.generators.items()):
        shift = z[k * p:(k + 1) * p]
        out[name] = g.with_translation([c - s for c, s in zip(g.c, shift)])
    return out


def _torus_target(rel: Relation, spec: GroupSpec) -> Relation:
    # integral expected translations are the identity in Ω
    if rel.expected_kind == "translation" and _is_integral(rel.expected):
        return Relation(rel.word, "identity", None, None, False, rel.name)
    return rel


def splitting_obstruction(spec: GroupSpec) -> SplitResult:
    """Decide whether G ≅ ℤ^p ⋊ Ω by solving for integer corrections of the lifts.

    Every relation must hold exactly (residual 0) for the shifted lifts; the
    residual is affine in the unknowns, so the conditions form one integer
    linear system M z = b.
    """
    names = list(spec.generators)
    p = spec.p
    nvar = p * len(names)
    zero = [Fraction(0)] * nvar
    rows, rhs, per_relation = [], [], []
    for rel in spec.relations:
        target = _torus_target(rel, spec)
        r0 = relation_residual(target, spec, _shifted(spec, zero))
        if not r0.is_pure_translation():
            raise InvalidInput(f"relation {rel.name or rel.word} does not hold on the torus")
        base = list(r0.c)
        cols = []
        for j in range(nvar):
            e = list(zero)
            e[j] = Fraction(1)
            rj = relation_residual(target, spec, _shifted(spec, e))
            if not rj.is_pure_translation():
                raise Unsupported("corrections enter the relation non-affinely")
            cols.append([a - b for a, b in zip(rj.c, base)])
        rational_base = [_as_rational(x) for x in base]
        M_rel = [[_as_rational(cols[j][i]) for j in range(nvar)] for i in range(p)]
        if any(x is None for row in M_rel for x in row):
            raise Unsupported("correction coefficients are not rational")
        per_relation.append({"relation": rel.name or " ".join(rel.word),
                             "constant": _fmt(base), "matrix": [[str(x) for x in r] for r in M_rel]})
        if any(x is None for x in rational_base):
            # an irrational constant can never be cancelled by integer corrections
            return SplitResult(False, None, Matrix(M_rel, ncols=nvar), base, None,
                               {"reason": "irrational residual", "relation": rel.name, "systems": per_relation})
        rows.extend(M_rel)
        rhs.extend(-x for x in rational_base)
    M = Matrix(rows, ncols=nvar) if rows else Matrix.zeros(0, nvar)
    if not rows:
        lifts = {n: tuple(Fraction(0) for _ in range(p)) for n in names}
        return SplitResult(True, lifts, M, [], None, {"reason": "no relations"})
    res = solve_integer(M, rhs)
    witness = {"systems": per_relation, "unknowns": [f"{n}[{i}]" for n in names for i in range(p)]}
    if not res.has_integer_solution:
        witness["reason"] = ("no rational solution" if not res.consistent
                             else "rational solution exists but no integer solution")
        return SplitResult(False, None, M, rhs, res, witness)
    z = list(res.integer_solution)
    lifts = {n: tuple(z[k * p:(k + 1) * p]) for k, n in enumerate(names)}
    # substitute back: every relation must now hold with residual exactly 0
    shifted = _shifted(spec, z)
    for rel in spec.relations:
        chk = relation_residual(_torus_target(rel, spec), spec, shifted)
        if not chk.is_identity():
            raise AssertionError(f"lift verification failed on {rel.name}")
    witness["lifted_generators"] = {n: _fmt(g.c) for n, g in shifted.items()}
    return SplitResult(True, lifts, M, rhs, res, witness)


def leaf_conjugate(g: BundleAutomorphism, v, spec: GroupSpec) -> BundleAutomorphism:
    """g ∘ τ_v ∘ g⁻¹."""
    tau = BundleAutomorphism.translation(v, spec.base, spec.field)
    return g.compose(tau).compose(g.inverse())
