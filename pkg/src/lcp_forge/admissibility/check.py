"""Run every decidable hypothesis on a group specification and collect verdicts."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from ..errors import LcpError, NotSimilarity
from .linear import flat_subspace, is_semisimple, modulus_classes, rational_hull, similarity_certificate
from .splitting import Splitting

PASS, FAIL, ECHO, UNSUPPORTED = "PASS", "FAIL", "ECHO", "UNSUPPORTED"


@dataclass
class HypothesisResult:
    hypothesis: str
    verdict: str
    witness: dict = dc_field(default_factory=dict)
    mandatory: bool = True

    def to_json(self):
        return {"hypothesis": self.hypothesis, "verdict": self.verdict, "witness": self.witness,
                "mandatory": self.mandatory}


@dataclass
class AdmissibilityReport:
    name: str
    hypotheses: list
    splitting: Splitting | None = None

    @property
    def passed(self):
        return all(h.verdict == PASS for h in self.hypotheses if h.mandatory)

    @property
    def verdict(self):
        return PASS if self.passed else FAIL

    def __getitem__(self, name) -> HypothesisResult:
        for h in self.hypotheses:
            if h.hypothesis == name:
                return h
        raise KeyError(name)

    def to_json(self):
        return {"name": self.name, "overall": self.verdict, "hypotheses": [h.to_json() for h in self.hypotheses]}


def _unimodular(spec):
    bad = {}
    for n, g in spec.generators.items():
        if not g.A.is_integer():
            bad[n] = "linear part is not integral"
        elif abs(g.A.det()) != 1:
            bad[n] = f"det = {g.A.det()}"
    return HypothesisResult("linear_parts_unimodular", FAIL if bad else PASS,
                            {"failures": bad} if bad else {"generators": list(spec.generators)})


def _semisimple(spec):
    wit, ok = {}, True
    for n, g in spec.generators.items():
        r = is_semisimple(g.A)
        wit[n] = r.to_json()
        ok = ok and r.semisimple
    return HypothesisResult("semisimple", PASS if ok else FAIL, wit)


def _derive_splitting(spec):
    for n, g in spec.generators.items():
        classes = modulus_classes(g.A)
        if abs(float(classes[0].modulus) - 1) > 1e-9:
            return flat_subspace(g.A, classes[0], classes=classes), n
    return None, None


def _splitting_preserved(spec, S):
    bad = {}
    for n, g in spec.generators.items():
        ok, wit = S.preserved_by(g.A)
        if not ok:
            bad[n] = wit
    return HypothesisResult("splitting_preserved", FAIL if bad else PASS,
                            {"failures": bad} if bad else {"q": S.q, "p": S.p})


def _similarity(spec, S):
    names = list(spec.generators)
    try:
        restricted = [S.restrict(spec.generators[n].A) for n in names]
        cert = similarity_certificate(restricted, S.scalar_product)
    except NotSimilarity as exc:
        return HypothesisResult("similarity_on_Eq", FAIL, {"reason": str(exc), "witness": exc.witness}), None
    ratios = dict(zip(names, cert.ratios))
    return HypothesisResult("similarity_on_Eq", PASS,
                            {"ratios": {n: r.to_json() for n, r in ratios.items()}}), ratios


def _not_all_isometries(ratios):
    if ratios is None:
        return HypothesisResult("not_all_isometries", FAIL, {"reason": "no similarity certificate"})
    strict = [n for n, r in ratios.items() if not r.is_one()]
    if strict:
        return HypothesisResult("not_all_isometries", PASS, {"strict_similarities": strict})
    return HypothesisResult("not_all_isometries", FAIL, {"reason": "every generator has ratio 1"})


def _density(S):
    hull = rational_hull(S)
    return HypothesisResult("density", PASS if hull.is_full() else FAIL, {"rational_hull": hull.to_json()})


def _fixed_points(spec):
    from ..groups.fixed_points import fiber_fixed_point_free
    from ..groups.spec import evaluate_word
    if not spec.base_fixed_points:
        return HypothesisResult("fiber_fixed_point_free", PASS, {"declared_points": 0})
    rows, ok = [], True
    for fp in spec.base_fixed_points:
        f = evaluate_word(fp.word, spec)
        try:
            r = fiber_fixed_point_free(f, fp.point)
            rows.append({"word": fp.word, "point": [str(x) for x in fp.point], **r.to_json()})
            ok = ok and r.free
        except LcpError as exc:
            rows.append({"word": fp.word, "error": str(exc)})
            ok = False
    return HypothesisResult("fiber_fixed_point_free", PASS if ok else FAIL, {"points": rows})


def _relations(spec):
    from ..groups.relations import verify_all
    res = verify_all(spec)
    ok = all(r.passed for r in res)
    return HypothesisResult("relations", PASS if ok else FAIL, {"relations": [r.to_json() for r in res]})


def _sample_point(spec):
    if spec.base_fixed_points:
        return [float(x) for x in spec.base_fixed_points[0].point]
    pt = []
    for f in spec.base.factors:
        if f.kind == "halfline":
            pt.append(1.0)
        elif f.kind == "sphere2":
            pt.extend([0.6, 0.0, 0.8])
        else:
            pt.extend([0.1 * (i + 1) for i in range(f.dim)])
    return pt


def _distance(spec, x, y):
    d2, o = 0.0, 0
    for f in spec.base.factors:
        for i in range(f.dim):
            a, b = x[o + i], y[o + i]
            if f.kind == "halfline":
                d2 += (math.log(a) - math.log(b)) ** 2
            else:
                d2 += (a - b) ** 2
        o += f.dim
    return math.sqrt(d2)


def _properness(spec, max_len=3, radius=1.0):
    """Echo the certificate and count orbit points of short words near a sample point."""
    x0 = _sample_point(spec)
    actions = {}
    for n, g in spec.generators.items():
        for e in (1, -1):
            a = g.base_action if e == 1 else g.base_action.inverse()
            actions[(n, e)] = ([[float(v) for v in r] for r in a.B.rows], [float(v) for v in a.d])
    images = set()
    near = 0
    for length in range(max_len + 1):
        for word in itertools.product(actions, repeat=length):
            if any(word[i][0] == word[i + 1][0] and word[i][1] != word[i + 1][1] for i in range(length - 1)):
                continue
            x = list(x0)
            for key in reversed(word):
                B, d = actions[key]
                x = [sum(B[i][j] * x[j] for j in range(len(x))) + d[i] for i in range(len(x))]
            key = tuple(round(v, 9) for v in x)
            if key in images:
                continue
            images.add(key)
            if _distance(spec, x, x0) < radius:
                near += 1
    return HypothesisResult("properness", ECHO,
                            {"certificate": spec.properness_certificate or "(none supplied)",
                             "sample_point": x0, "max_word_length": max_len,
                             "distinct_orbit_points": len(images), "orbit_points_within_radius": near,
                             "radius": radius, "note": "spot check only; properness is not decided"},
                            mandatory=False)


def check_admissible(spec) -> AdmissibilityReport:
    hyps = [_unimodular(spec), _semisimple(spec)]
    S = spec.splitting
    derived_from = None
    if S is None:
        try:
            S, derived_from = _derive_splitting(spec)
        except LcpError as exc:
            S = None
            hyps.append(HypothesisResult("splitting_preserved", FAIL, {"reason": str(exc)}))
    if S is None:
        if not any(h.hypothesis == "splitting_preserved" for h in hyps):
            hyps.append(HypothesisResult("splitting_preserved", FAIL,
                                         {"reason": "no splitting given and no generator expands"}))
        hyps.append(_not_all_isometries(None))
    else:
        h = _splitting_preserved(spec, S)
        if derived_from:
            h.witness["derived_from"] = derived_from
        hyps.append(h)
        sim, ratios = _similarity(spec, S) if h.verdict == PASS else (
            HypothesisResult("similarity_on_Eq", FAIL, {"reason": "splitting not preserved"}), None)
        hyps.append(sim)
        hyps.append(_not_all_isometries(ratios))
        hyps.append(_density(S))
    hyps.append(_fixed_points(spec))
    hyps.append(_relations(spec))
    hyps.append(_properness(spec))
    return AdmissibilityReport(spec.name, hyps, S)


__all__ = ["AdmissibilityReport", "HypothesisResult", "check_admissible", "PASS", "FAIL", "ECHO", "UNSUPPORTED"]
