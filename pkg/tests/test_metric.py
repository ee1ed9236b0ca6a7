import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcp_forge.errors import InvalidInput, TruncationUnsound
from lcp_forge.groups import parse_group_spec, rho
from lcp_forge.linalg import Matrix
from lcp_forge.metric import (AffineChartMap, BumpSpec, CyclicAction, ExprMap, SamplePlan, average_metric,
                              averaged_metric_fn, dual_frame_check, equivariance_residual, estimate_ratio,
                              euclidean_metric, eval_metric, field_values, frame_orthonormality, lie_bracket,
                              lie_bracket_fd, parse_field, parse_metric_spec, pullback_metric, sample_points)

UV = ("u", "v")
unimodular_like = st.sampled_from([[[1, 1], [0, 1]], [[2, 1], [1, 1]], [["1/2", 0], [0, 3]], [[0, -1], [1, 0]]])
shifts = st.lists(st.integers(-3, 3), min_size=2, max_size=2)
planar = st.lists(st.floats(-1.5, 1.5), min_size=2, max_size=2)


def affine(rows, e):
    return AffineChartMap(Matrix.rational(rows), e)


def warped(x):
    u, v = x
    return np.array([[1 + v * v, u * v], [u * v, 2 + u * u]])


# -- pullbacks -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(unimodular_like, shifts, unimodular_like, shifts, planar)
def test_pullback_is_functorial_for_affine_maps(A, a, B, b, x):
    f, g = affine(A, a), affine(B, b)
    direct = pullback_metric(f.compose(g), warped, x)
    stepwise = pullback_metric(g, lambda y: pullback_metric(f, warped, y), x)
    assert np.allclose(direct, stepwise, rtol=1e-10, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(planar)
def test_pullback_is_functorial_for_polynomial_maps(x):
    f = ExprMap(UV, ["u + v^2", "v"])
    g = ExprMap(UV, ["u", "v + u^3"])
    direct = pullback_metric(f.compose(g), warped, x)
    stepwise = pullback_metric(g, lambda y: pullback_metric(f, warped, y), x)
    assert np.allclose(direct, stepwise, rtol=1e-9, atol=1e-9)


def test_expr_map_inverse_round_trip():
    f = ExprMap(UV, ["u + v^2", "v"], ["u - v^2", "v"])
    x = np.array([0.3, -1.2])
    assert np.allclose(f.inverse().apply(f.apply(x)), x)
    with pytest.raises(InvalidInput):
        ExprMap(UV, ["u"]).inverse()


def test_equivariance_and_ratio_estimate_agree(case):
    data = case("counterexample32")
    spec = parse_group_spec(data["group"])
    m = parse_metric_spec(data["metric"], spec.field)
    lam = rho(spec.generator("T_A"), spec.splitting)
    for x in sample_points(m.coords, 10, 1, positive=m.positive):
        assert equivariance_residual(spec.generator("T_A"), m, lam, x) < 1e-9
        # the numerical generalised eigenvalue is an independent route to the same ratio
        assert estimate_ratio(spec.generator("T_A"), m, x) == pytest.approx(float(lam), rel=1e-9)
        assert equivariance_residual(spec.generator("T_A"), m, 1, x) > 1


# -- metric specs ----------------------------------------------------------------

def test_positive_definiteness_is_certified():
    ok = parse_metric_spec({"coords": ["u", "v"], "entries": [["2", "1"], ["1", "2"]]})
    assert np.allclose(eval_metric(ok, [0, 0]), [[2, 1], [1, 2]])
    bad = parse_metric_spec({"coords": ["u", "v"], "entries": [["1", "2"], ["2", "1"]]})
    with pytest.raises(InvalidInput):
        eval_metric(bad, [0, 0])
    # degenerate where u vanishes
    edge = parse_metric_spec({"coords": ["u", "v"], "diag": ["u^2", "1"]})
    with pytest.raises(InvalidInput):
        eval_metric(edge, [0.0, 1.0])
    assert eval_metric(edge, [0.0, 1.0], certify=False)[0, 0] == 0


@pytest.mark.parametrize("data", [
    {"coords": ["u", "v"], "entries": [["1", "u"], ["0", "1"]]},
    {"coords": ["u", "v"], "diag": ["t", "1"]},
    {"coords": ["u", "v"], "diag": ["u^-2", "1"]},
    {"coords": ["u", "u"], "diag": ["1", "1"]},
    {"coords": ["u", "v"], "diag": ["1"]},
    {"coords": ["u", "v"]},
])
def test_malformed_metric_specs(data):
    with pytest.raises(InvalidInput):
        parse_metric_spec(data)


def test_positive_coordinates_are_enforced():
    m = parse_metric_spec({"coords": ["u", "t"], "diag": ["1", "t^-2"], "positive": ["t"]})
    assert eval_metric(m, [0, 2])[1, 1] == 0.25
    with pytest.raises(InvalidInput):
        eval_metric(m, [0, -1])


# -- frames and brackets ---------------------------------------------------------

def test_big_example_frame_is_orthonormal(case):
    data = case("bigexample53")
    spec = parse_group_spec(data["group"])
    m = parse_metric_spec(data["metric"], spec.field)
    frame = [parse_field(X, m.coords) for X in data["checks"]["frame"]]
    coframe = [parse_field(th, m.coords) for th in data["checks"]["coframe"]]
    for x in sample_points(m.coords, 5, 2, positive=m.positive):
        assert frame_orthonormality(frame, m, x).residual < 1e-12
        assert dual_frame_check(frame, coframe, x, m.coords).residual < 1e-12


def test_dual_frame_reports_permutation():
    frame = [parse_field({"u": "1"}, UV), parse_field({"v": "2"}, UV)]
    coframe = [parse_field({"v": "1/2"}, UV), parse_field({"u": "1"}, UV)]
    res = dual_frame_check(frame, coframe, [0.1, 0.2], UV)
    assert res.residual == pytest.approx(1.0)
    assert res.permutation == [1, 0]
    skewed = [parse_field({"v": "1"}, UV), parse_field({"u": "1"}, UV)]
    assert dual_frame_check(frame, skewed, [0.1, 0.2], UV).permutation is None


polys = st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3).map(
    lambda ts: " + ".join(f"({c})*u^{i}*v^{j}" for c, i, j in ts))


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys, planar)
def test_exact_bracket_matches_finite_differences(a, b, c, d, x):
    X = parse_field({"u": a, "v": b}, UV)
    Y = parse_field({"u": c, "v": d}, UV)
    exact = field_values(lie_bracket(X, Y, UV), UV, x)
    fd = lie_bracket_fd(X, Y, x, 1e-4, UV)
    assert np.allclose(exact, fd, rtol=1e-5, atol=1e-5)


def test_bracket_is_antisymmetric():
    X = parse_field({"u": "v^2", "v": "u"}, UV)
    Y = parse_field({"v": "u*v"}, UV)
    XY, YX = lie_bracket(X, Y, UV), lie_bracket(Y, X, UV)
    assert set(XY) == set(YX) and all(XY[k] == -YX[k] for k in XY)
    assert lie_bracket(X, X, UV) == {}


def test_parse_field_rejects_unknown_coordinate():
    with pytest.raises(InvalidInput):
        parse_field({"w": "1"}, UV)


# -- averaging -------------------------------------------------------------------

WT = ("w", "t")
DILATION = affine([[2, 0], [0, 2]], [0, 0])


def bump(k=4):
    return BumpSpec(WT, [[0.0, 1.5]], [0.5], k)


def dilation_action(displacement=math.log(2) * (1 - 1e-12)):
    return CyclicAction(DILATION, 2.0, "t", displacement, log_height=True)


def test_trivial_group_gives_cutoff_times_seed():
    seed = euclidean_metric(WT)
    x = [0.1, 1.4]
    res = average_metric(None, seed, bump(), x)
    assert res.powers == [0]
    assert np.allclose(res.matrix, bump()(dict(zip(WT, x))) * np.eye(2))


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(0.3, 20.0))
def test_averaged_metric_is_equivariant(w, t):
    g = averaged_metric_fn(dilation_action(), euclidean_metric(WT), bump())
    x = [w, t]
    base = g(x)
    if np.max(np.abs(base)) == 0:
        return
    pb = pullback_metric(DILATION, g, x)
    assert np.allclose(pb, 4.0 * base, rtol=1e-9, atol=1e-12 * np.max(np.abs(base)))


def test_far_point_is_degenerate():
    res = average_metric(dilation_action(), euclidean_metric(WT), bump(), [50.0, 1.5])
    assert res.degenerate and not res.powers


def test_bad_displacement_is_caught():
    with pytest.raises(TruncationUnsound):
        average_metric(dilation_action(1.0), euclidean_metric(WT), bump(), [0.0, 1.5])
    with pytest.raises(TruncationUnsound):
        average_metric(dilation_action(0.0), euclidean_metric(WT), bump(), [0.0, 1.5])
    near_zero = BumpSpec(WT, [[0.0, 0.5]], [0.6])
    with pytest.raises(TruncationUnsound):
        average_metric(dilation_action(), euclidean_metric(WT), near_zero, [0.0, 1.5])


def test_bump_validation():
    with pytest.raises(InvalidInput):
        bump(k=3)
    with pytest.raises(InvalidInput):
        BumpSpec(WT, [[0, 1]], [0.0])
    with pytest.raises(InvalidInput):
        BumpSpec(WT, [[0, 1], [0, 2]], [1.0])
    assert bump()({"w": 0.0, "t": 1.5}) == 1.0
    assert bump()({"w": 0.5, "t": 1.5}) == 0.0


# -- sampling --------------------------------------------------------------------

def test_sampling_is_seeded_and_respects_positivity():
    a = sample_points(("u", "t"), 20, 4, positive=("t",))
    assert a == sample_points(("u", "t"), 20, 4, positive=("t",))
    assert a != sample_points(("u", "t"), 20, 5, positive=("t",))
    assert all(0.25 <= t <= 3.0 and -2 <= u <= 2 for u, t in a)
    with pytest.raises(ValueError):
        SamplePlan(a, h=0)
