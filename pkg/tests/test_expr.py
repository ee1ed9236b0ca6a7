import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lcp_forge.errors import InvalidInput, Unsupported
from lcp_forge.expr import Expr, parse
from lcp_forge.numfield import NumberField

Q5 = NumberField(["-5", "0", "1"], {"lo": "2", "hi": "3"}, "sqrt5")
VARS = ("t", "w1", "v2")

# small random Laurent polynomials written as text, parsed by both us and sympy
monomials = st.tuples(st.integers(-4, 4).filter(bool), st.integers(-2, 3), st.integers(0, 3), st.integers(-1, 2)).map(
    lambda m: f"({m[0]})*t^({m[1]})*w1^({m[2]})*v2^({m[3]})")
formulas = st.lists(monomials, min_size=1, max_size=4).map(" + ".join)
points = st.tuples(*(st.floats(0.3, 3.0) for _ in VARS))


def sym(text):
    return sympy.sympify(text.replace("^", "**"), locals={v: sympy.Symbol(v) for v in VARS})


def test_docstring_example():
    assert parse("t^-2 * (w1 + 1/2)").evaluate({"t": 2.0, "w1": 1.5}) == 0.5


def test_decimal_literals_are_exact():
    assert parse("0.1").constant_value() == Fraction(1, 10)
    assert parse("3/4 - 1/4").constant_value() == Fraction(1, 2)


def test_constants_and_pi():
    e = parse("s*t", {"s": Q5.gen})
    assert e.variables() == ["t"]
    assert e.terms[(("t", 1),)] == Q5.gen
    assert parse("pi").evaluate({}) == pytest.approx(math.pi)
    assert parse("pi").diff("pi") == 1


@settings(max_examples=80, deadline=None)
@given(formulas, points)
def test_evaluation_matches_sympy(text, p):
    env = dict(zip(VARS, p))
    ours = parse(text).evaluate(env)
    theirs = float(sym(text).subs({sympy.Symbol(k): v for k, v in env.items()}))
    assert ours == pytest.approx(theirs, rel=1e-10, abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(formulas, st.sampled_from(VARS))
def test_diff_matches_sympy(text, var):
    ours = parse(text).diff(var)
    theirs = sympy.expand(sympy.diff(sym(text), sympy.Symbol(var)))
    assert sympy.expand(sym(str(ours).replace("^", "**")) - theirs) == 0


@settings(max_examples=60, deadline=None)
@given(formulas, formulas)
def test_leibniz_rule(a, b):
    f, g = parse(a), parse(b)
    assert (f * g).diff("t") == f.diff("t") * g + f * g.diff("t")


@settings(max_examples=60, deadline=None)
@given(formulas, formulas, points)
def test_substitution_is_composition(text, image, p):
    env = dict(zip(VARS, p))
    f = parse(text).substitute({"w1": parse(image)})
    inner = parse(image).evaluate(env)
    assert f.evaluate(env) == pytest.approx(parse(text).evaluate({**env, "w1": inner}), rel=1e-9, abs=1e-9)


def test_substitution_of_negative_power_needs_monomial():
    assert parse("t^-1").substitute({"t": "2*w1"}) == parse("(1/2)*w1^-1")
    with pytest.raises(Unsupported):
        parse("t^-1").substitute({"t": "w1 + 1"})


def test_negative_power_vars():
    assert parse("t^-2*w1 + v2").negative_power_vars() == ["t"]


@pytest.mark.parametrize("text", ["t**0.5", "t^w1", "sin(t)", "'x'", "t < 1", "(", "True"])
def test_rejects_unsupported_input(text):
    with pytest.raises(InvalidInput):
        parse(text)


def test_non_monomial_division_is_unsupported():
    with pytest.raises(Unsupported):
        parse("1/(t + 1)")


def test_evaluation_errors():
    with pytest.raises(InvalidInput):
        parse("w1").evaluate({})
    with pytest.raises(InvalidInput):
        parse("t^-1").evaluate({"t": 0.0})
    with pytest.raises(InvalidInput):
        parse(["t"])
    with pytest.raises(InvalidInput):
        parse("t").constant_value()


def test_equality_and_hash():
    assert parse("t*w1 - w1*t") == 0
    assert hash(parse("t + w1")) == hash(parse("w1 + t"))
    assert Expr.var("t") ** 0 == 1
