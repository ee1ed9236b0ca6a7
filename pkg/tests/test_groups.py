import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lcp_forge.admissibility import check_admissible
from lcp_forge.errors import InvalidInput, Unsupported
from lcp_forge.groups import (EUCLIDEAN, BaseAction, BaseFactor, BaseManifold, BundleAutomorphism,
                              affine_fixed_point_analysis, compose, constant_translation_obstruction,
                              evaluate_word, fiber_fixed_point_free, invert, invert_word, leaf_conjugate,
                              parse_group_spec, parse_token, rho, rho_word, split_extension,
                              splitting_obstruction, verify_all, word_linear_part)
from lcp_forge.linalg import Matrix

PLANE = BaseManifold([BaseFactor(EUCLIDEAN, ("x", "y"))])
SL2 = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, -1], [1, 0]], [[2, 1], [1, 1]], [[-1, 0], [0, -1]]]
GL2_BASE = [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]], [[1, 0], [0, -1]]]
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def automorphisms(draw):
    A = draw(st.sampled_from(SL2))
    c = draw(st.lists(rationals, min_size=2, max_size=2))
    L = Matrix.rational(draw(st.lists(st.lists(rationals, min_size=2, max_size=2), min_size=2, max_size=2)))
    B = Matrix.rational(draw(st.sampled_from(GL2_BASE)))
    d = draw(st.lists(rationals, min_size=2, max_size=2))
    return BundleAutomorphism(A, c, L, BaseAction(PLANE, B, d))


points = st.tuples(st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2))


def group(name, case):
    return parse_group_spec(case(name)["group"])


# -- automorphism algebra -----------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(automorphisms(), automorphisms(), automorphisms())
def test_composition_is_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=60, deadline=None)
@given(automorphisms(), automorphisms(), points)
def test_composition_acts_right_to_left(f, g, pt):
    a, x = pt
    assert compose(f, g).apply(a, x) == f.apply(*g.apply(a, x))


@settings(max_examples=60, deadline=None)
@given(automorphisms(), points)
def test_inverse(f, pt):
    assert compose(f, invert(f)).is_identity()
    assert compose(invert(f), f).is_identity()
    a, x = pt
    assert invert(f).apply(*f.apply(a, x)) == (tuple(Fraction(v) for v in a), tuple(Fraction(v) for v in x))


@settings(max_examples=30, deadline=None)
@given(automorphisms(), st.integers(-3, 3), st.integers(-3, 3))
def test_powers_add(f, j, k):
    assert compose(f.power(j), f.power(k)) == f.power(j + k)


def test_rejects_non_unimodular_linear_part():
    with pytest.raises(InvalidInput):
        BundleAutomorphism([[2, 0], [0, 1]], [0, 0], None, BaseAction.identity(PLANE))
    with pytest.raises(InvalidInput):
        BundleAutomorphism([["1/2", 0], [0, 2]], [0, 0], None, BaseAction.identity(PLANE))


def test_word_tokens():
    assert parse_token("T_A^-1") == ("T_A", -1)
    assert parse_token("g") == ("g", 1)
    assert invert_word(["a", "b^2"]) == ["b^-2", "a^-1"]
    with pytest.raises(InvalidInput):
        parse_token("")


# -- worked examples ----------------------------------------------------------

def test_words_compose_left_to_right(case):
    spec = group("counterexample32", case)
    TA, TB = spec.generator("T_A"), spec.generator("T_B")
    assert evaluate_word(["T_A", "T_B^-1"], spec) == TA.compose(TB.inverse())
    with pytest.raises(InvalidInput):
        evaluate_word(["nope"], spec)


@pytest.mark.parametrize("name", ["counterexample32", "withorbifold", "notsemidirect", "bigexample53"])
def test_declared_relations_hold(case, name):
    spec = group(name, case)
    results = verify_all(spec)
    assert results and all(r.passed for r in results), [r.to_json() for r in results if not r.passed]


@pytest.mark.parametrize("name", ["counterexample32", "withorbifold", "bigexample53"])
def test_examples_are_admissible(case, name):
    report = check_admissible(group(name, case))
    assert report.passed, report.to_json()


@pytest.mark.parametrize("name, reason", [
    ("notsemidirect", "rational solution exists but no integer solution"),
    ("counterexample32", "rational solution exists but no integer solution"),
    ("withorbifold", "rational solution exists but no integer solution"),
    ("bigexample53", "no rational solution"),
])
def test_splitting_obstruction(case, name, reason):
    res = splitting_obstruction(group(name, case))
    assert not res.exists
    assert res.witness["reason"] == reason


def test_split_group_gets_verified_lifts(case):
    data = case("withorbifold")["group"]
    # without the half-translation g squares to the identity and the zero lifts work
    data = {**data, "generators": [dict(data["generators"][0], translation={"const": ["0", "0"]}),
                                   data["generators"][1]],
            "relations": [{"name": "g_squared", "word": ["g", "g"], "equals": "identity"}]}
    res = splitting_obstruction(parse_group_spec(data))
    assert res.exists
    assert set(res.lifts) == {"g", "h"}


def test_leaf_conjugate_flips_fiber(case):
    spec = group("counterexample32", case)
    conj = leaf_conjugate(spec.generator("T_B"), [0, 0, 1, 0], spec)
    assert conj.is_pure_translation()
    assert [str(x) for x in conj.c] == ["0", "0", "-1", "0"]


# -- fixed points -------------------------------------------------------------

def test_affine_fixed_point_analysis():
    assert affine_fixed_point_analysis([[-1, 0], [0, -1]], [1, 1]).has_fixed_point
    res = affine_fixed_point_analysis([[1, 0], [0, -1]], [Fraction(1, 2), 0])
    assert res.order == 2 and not res.has_fixed_point
    assert res.b1 == (Fraction(1, 2), 0)
    with pytest.raises(InvalidInput):
        affine_fixed_point_analysis([[2, 1], [1, 1]], [0, 0])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([[[0, -1], [1, 0]], [[0, -1], [1, -1]], [[-1, 0], [0, -1]], [[1, 0], [0, -1]]]),
       st.lists(rationals, min_size=2, max_size=2))
def test_fixed_point_when_found_is_fixed(A, b):
    res = affine_fixed_point_analysis(A, b)
    if res.has_fixed_point:
        M = Matrix.rational(A)
        v = res.v2
        assert tuple(x + y for x, y in zip(M @ list(v), b)) == tuple(v)


def test_fiber_fixed_point_freeness(case):
    spec = group("withorbifold", case)
    g = spec.generator("g")
    pt = [0, 0, 1, 0]
    assert fiber_fixed_point_free(g, pt).free
    mutated = g.with_translation([0, 1])
    res = fiber_fixed_point_free(mutated, pt)
    assert not res.free and "lift_correction" in res.witness
    with pytest.raises(InvalidInput):
        fiber_fixed_point_free(g, [1, 0, 0, 0])
    with pytest.raises(InvalidInput):
        fiber_fixed_point_free(spec.generator("h"), pt)
    hyperbolic = BundleAutomorphism(spec.generator("h").A, [0, 0], None, g.base_action)
    with pytest.raises(Unsupported):
        fiber_fixed_point_free(hyperbolic, pt)


# -- ratios and the split extension -----------------------------------------

def test_rho_on_counterexample(case):
    spec = group("counterexample32", case)
    K = spec.field
    lam = rho(spec.generator("T_A"), spec.splitting)
    assert lam.squared == 9 + 4 * K.gen
    assert abs(float(lam) - (2 + 5 ** 0.5)) < 1e-12
    assert rho(spec.generator("T_B"), spec.splitting).is_one()


def test_rho_is_a_homomorphism_on_random_words(case):
    spec = group("bigexample53", case)
    names = list(spec.generators)
    rng = random.Random(11)
    for _ in range(40):
        u = [f"{rng.choice(names)}^{rng.choice([-1, 1])}" for _ in range(rng.randint(0, 4))]
        v = [f"{rng.choice(names)}^{rng.choice([-1, 1])}" for _ in range(rng.randint(0, 4))]
        assert rho_word(u + v, spec) == rho_word(u, spec) * rho_word(v, spec)
        assert word_linear_part(u + v, spec) == evaluate_word(u + v, spec).A


def test_split_extension(case):
    spec = group("bigexample53", case)
    ext = split_extension(spec)
    assert ext.verified
    assert rho_word(ext.section, spec) == ext.ratio_generator
    assert all(rho_word(w, spec).is_one() for w in ext.kernel)
    assert len(ext.kernel) == len(spec.generators) - 1


def test_constant_translation_obstruction(case):
    spec = group("bigexample53", case)
    sections = [["0", "0", "0", "0"], ["z", "0", "r1*t", "0"], ["0", "r2^2", "0", "t^-1"]]
    obs = constant_translation_obstruction(spec, ("T1", "Z"), sections)
    assert obs.obstructed and obs.sections_tried == 3
    assert obs.commutator == ["0", "0", "1", "0"]
    assert not constant_translation_obstruction(spec, ("T1", "T2"), sections[:1]).nonzero
