"""GroupSpec: generators, relations and side data of a group Ω, parsed from JSON."""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from ..admissibility.splitting import Splitting
from ..errors import InvalidInput
from ..expr import PI, parse
from ..linalg.matrix import Matrix
from ..numfield.field import NumberField
from ..numfield.transcendental import TransExt
from .automorphism import (BaseAction, BaseManifold, BundleAutomorphism, EUCLIDEAN, HALFLINE,
                           SPHERE2)

_TOKEN = re.compile(r"^(.+?)(?:\^(-?\d+))?$")


def parse_token(tok: str):
    """'T_A^-1' -> ('T_A', -1); bare names have exponent 1."""
    if not isinstance(tok, str) or not tok:
        raise InvalidInput(f"bad word token {tok!r}")
    m = _TOKEN.match(tok)
    name, exp = m.group(1), m.group(2)
    return name, int(exp) if exp is not None else 1


def invert_word(word):
    out = []
    for tok in reversed(word):
        name, e = parse_token(tok)
        out.append(f"{name}^{-e}")
    return out


class ScalarParser:
    """Reads exact scalars written as formulas in the field generator (and π)."""

    def __init__(self, K: NumberField, ext: Optional[TransExt] = None):
        self.K, self.ext = K, ext

    def __call__(self, s):
        if isinstance(s, (int, Fraction)):
            return self.K.coerce(s)
        e = parse(str(s), {self.K.name: self.K.gen})
        vars_ = e.variables()
        if not vars_:
            return self.K.coerce(e.constant_value())
        if vars_ == [PI] and self.ext is not None:
            total = self.ext.zero
            for k, c in e.terms.items():
                total = total + self.ext.coerce(c) * self.ext.symbol ** dict(k).get(PI, 0)
            return total
        raise InvalidInput(f"scalar {s!r} depends on {vars_}")


@dataclass
class Relation:
    word: list
    expected_kind: str = "identity"        # identity | translation | word
    expected: Optional[list] = None
    correction: Optional[tuple] = None      # declared ℤ^p residual (strict check)
    torus: bool = False                     # accept any ℤ^p residual
    name: str = ""

    def to_json(self):
        d = {"word": list(self.word)}
        if self.expected_kind == "translation":
            d["equals"] = {"translation": [str(x) for x in self.expected]}
        elif self.expected_kind == "word":
            d["equals"] = {"word": list(self.expected)}
        else:
            d["equals"] = "identity"
        if self.correction is not None:
            d["correction"] = [str(x) for x in self.correction]
        if self.torus:
            d["torus"] = True
        if self.name:
            d["name"] = self.name
        return d


@dataclass
class FixedPointDecl:
    word: list
    point: tuple


@dataclass
class GroupSpec:
    p: int
    field: NumberField
    base: BaseManifold
    generators: dict
    relations: list = dc_field(default_factory=list)
    splitting: Optional[Splitting] = None
    ext: Optional[TransExt] = None
    base_fixed_points: list = dc_field(default_factory=list)
    properness_certificate: str = ""
    name: str = ""
    options: dict = dc_field(default_factory=dict)
    raw: dict = dc_field(default_factory=dict)

    def generator(self, name):
        try:
            return self.generators[name]
        except KeyError:
            raise InvalidInput(f"unknown generator {name!r}") from None

    def identity(self):
        return BundleAutomorphism.identity(self.p, self.base, self.field)

    def with_generators(self, gens: dict) -> "GroupSpec":
        return GroupSpec(self.p, self.field, self.base, dict(gens), list(self.relations), self.splitting,
                         self.ext, list(self.base_fixed_points), self.properness_certificate, self.name,
                         dict(self.options), dict(self.raw))


def evaluate_word(word, spec: GroupSpec, generators: dict | None = None) -> BundleAutomorphism:
    """Compose the word left to right: [w1, …, wk] ↦ w1 ∘ … ∘ wk."""
    gens = generators if generators is not None else spec.generators
    result = spec.identity()
    cache = {}
    for tok in word:
        name, e = parse_token(tok)
        if name not in gens:
            raise InvalidInput(f"unknown generator {name!r} in word")
        key = (name, e)
        if key not in cache:
            cache[key] = gens[name].power(e)
        result = result.compose(cache[key])
    return result


# -- JSON parsing -------------------------------------------------------------

def _vector(data, n, sc, what):
    if data is None:
        return [sc.K.zero] * n
    if len(data) != n:
        raise InvalidInput(f"{what} must have length {n}")
    return [sc(x) for x in data]


def _base_action(base: BaseManifold, data, sc) -> BaseAction:
    K = sc.K
    n = base.dim
    B = [[K.zero] * n for _ in range(n)]
    d = [K.zero] * n
    for i in range(n):
        B[i][i] = K.one
    if data is None:
        return BaseAction(base, Matrix(B, ncols=n, field=K), d, K)
    if isinstance(data, dict) and "matrix" in data and len(base.factors) > 1:
        raise InvalidInput("give base actions per factor as a list")
    items = data if isinstance(data, list) else [data]
    if len(items) != len(base.factors):
        raise InvalidInput(f"expected {len(base.factors)} base factor actions, got {len(items)}")
    for f, o, act in zip(base.factors, base.offsets, items):
        act = act or {}
        if f.kind == HALFLINE:
            B[o][o] = sc(act.get("scale", 1))
            if act.get("translation"):
                raise InvalidInput("half-line actions are scalings only")
        else:
            if "matrix" in act:
                M = act["matrix"]
                if len(M) != f.dim or any(len(r) != f.dim for r in M):
                    raise InvalidInput(f"base matrix for factor {f.coords} has the wrong size")
                for i in range(f.dim):
                    for j in range(f.dim):
                        B[o + i][o + j] = sc(M[i][j])
            if "translation" in act:
                if f.kind == SPHERE2:
                    raise InvalidInput("sphere actions are orthogonal maps without translation")
                tv = _vector(act["translation"], f.dim, sc, "base translation")
                for i in range(f.dim):
                    d[o + i] = tv[i]
    return BaseAction(base, Matrix(B, ncols=n, field=K), d, K)


def parse_generator(data, p, base, sc) -> BundleAutomorphism:
    name = data.get("name")
    if not name:
        raise InvalidInput("every generator needs a name")
    lin = data.get("linear")
    if lin is None:
        A = Matrix.identity(p)
    else:
        A = Matrix.rational(lin)
    if A.shape != (p, p):
        raise InvalidInput(f"linear part of {name} must be {p}x{p}")
    tr = data.get("translation") or {}
    if isinstance(tr, list):
        tr = {"const": tr}
    c = _vector(tr.get("const"), p, sc, f"translation of {name}")
    n = base.dim
    K = sc.K
    L = [[K.zero] * n for _ in range(p)]
    for coord, col in (tr.get("linear") or {}).items():
        j = base.index(coord)
        colv = _vector(col, p, sc, f"translation column {coord} of {name}")
        for i in range(p):
            L[i][j] = colv[i]
    return BundleAutomorphism(A, c, Matrix(L, ncols=n, field=K), _base_action(base, data.get("base"), sc), name)


def parse_splitting(data, p, sc) -> Splitting:
    field = sc.ext if (sc.ext is not None and _mentions_pi(data)) else sc.K
    conv = (lambda x: field.coerce(sc(x))) if field is not sc.K else sc
    Eq = [[conv(x) for x in col] for col in data["Eq"]]
    Epq = [[conv(x) for x in col] for col in data.get("Epq", [])]
    for col in Eq + Epq:
        if len(col) != p:
            raise InvalidInput(f"splitting vectors must have length {p}")
    BEq = Matrix.from_columns(Eq, field=field)
    BEpq = Matrix.from_columns(Epq, nrows=p, field=field) if Epq else None
    G = data.get("scalar_product")
    Gm = Matrix([[conv(x) for x in r] for r in G], field=field) if G is not None else None
    return Splitting(BEq, BEpq, Gm, field)


def _mentions_pi(obj):
    if isinstance(obj, str):
        return PI in parse(obj).variables() if any(ch.isalpha() for ch in obj) else False
    if isinstance(obj, dict):
        return any(_mentions_pi(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_mentions_pi(v) for v in obj)
    return False


def parse_field(data):
    if data is None:
        return NumberField.rationals()
    return NumberField(data["min_poly"], data.get("root_box"), data.get("name", "theta"))


def parse_group_spec(data: dict) -> GroupSpec:
    if not isinstance(data, dict):
        raise InvalidInput("group spec must be a JSON object")
    try:
        p = int(data["p"])
        K = parse_field(data.get("field"))
        ext = TransExt(K) if data.get("transcendental", False) else None
        sc = ScalarParser(K, ext)
        base = BaseManifold.from_json(data["base"])
        gens = {}
        for g in data["generators"]:
            aut = parse_generator(g, p, base, sc)
            if aut.name in gens:
                raise InvalidInput(f"duplicate generator {aut.name}")
            gens[aut.name] = aut
        rels = []
        for r in data.get("relations", []):
            word = list(r["word"])
            if not word:
                raise InvalidInput("relation words must be non-empty")
            eq = r.get("equals", "identity")
            if eq == "identity" or eq is None:
                rel = Relation(word)
            elif "translation" in eq:
                rel = Relation(word, "translation", [sc(x) for x in eq["translation"]])
            elif "word" in eq:
                rel = Relation(word, "word", list(eq["word"]))
            else:
                raise InvalidInput(f"unrecognised relation target {eq!r}")
            if "correction" in r:
                rel.correction = tuple(Fraction(x) for x in r["correction"])
            rel.torus = bool(r.get("torus", False))
            rel.name = r.get("name", "")
            rels.append(rel)
        splitting = parse_splitting(data["splitting"], p, sc) if data.get("splitting") else None
        fps = []
        for fp in data.get("base_fixed_points", []):
            point = tuple(sc(x) for x in fp["point"])
            if len(point) != base.dim:
                raise InvalidInput("fixed point has the wrong dimension")
            fps.append(FixedPointDecl(list(fp["word"]), point))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed group spec: {exc!r}") from exc
    spec = GroupSpec(p, K, base, gens, rels, splitting, ext, fps,
                     data.get("properness_certificate", ""), data.get("name", ""),
                     dict(data.get("options", {})), data)
    for fp in spec.base_fixed_points:
        g = evaluate_word(fp.word, spec)
        if not g.base_action.fixes(fp.point):
            raise InvalidInput(f"declared fixed point {fp.point} is not fixed by {fp.word}")
    return spec
