"""The twelve acceptance criteria, each timed against its budget."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from lcp_forge.admissibility import (block_decompose, check_admissible, density_check, is_semisimple,
                                     modulus_classes, rational_hull)
from lcp_forge.cli.runners import _averaging_setup
from lcp_forge.groups import (constant_translation_obstruction, leaf_conjugate, parse_group_spec, rho, rho_word,
                              split_extension, splitting_obstruction, verify_all)
from lcp_forge.groups.spec import ScalarParser
from lcp_forge.linalg import Matrix, Poly, expand_factors, factor_with_content, hnf, snf, solve_integer
from lcp_forge.metric import (average_metric, dual_frame_check, equivariance_residual, field_values,
                              frame_orthonormality, lie_bracket, lie_bracket_fd, parse_field, parse_metric_spec,
                              pullback_metric, sample_points)
from lcp_forge.numfield import NumberField, nf_embed

pytestmark = pytest.mark.acceptance

Q5 = NumberField(["-5", "0", "1"], {"lo": "2", "hi": "3"}, "sqrt5")
A0 = [[1, 1], [1, 2]]
A32 = [[1, 2, 0, 0], [2, 3, 0, 0], [0, 0, 1, 2], [0, 0, 2, 3]]


def q5(text):
    return ScalarParser(Q5)(text)


def test_c01_notsemidirect_obstruction(criterion, case):
    with criterion(1, "notsemidirect: (I-A)x=(1,0) has no integer solution", 1.0):
        A = Matrix.rational([[-1, 1], [1, -2]])
        res = solve_integer(Matrix.identity(2) - A, [1, 0])
        assert res.consistent
        assert not res.has_integer_solution
        assert list(res.rational_solution) == [Fraction(3, 5), Fraction(1, 5)]
        spec = parse_group_spec(case("notsemidirect")["group"])
        assert not splitting_obstruction(spec).exists


def test_c02_counterexample_relations(criterion, case):
    with criterion(2, "counterexample32 relations and leaf-stabilizer witness", 1.0):
        spec = parse_group_spec(case("counterexample32")["group"])
        results = {r.name: r for r in verify_all(spec)}
        comm = results["TA_TB_commutator"]
        assert comm.strict_pass and comm.residual == ["1", "1", "0", "0"]
        sq = results["TB_squared"]
        assert sq.strict_pass and sq.residual == ["0", "0", "0", "0"]
        e3 = [0, 0, 1, 0]
        h = leaf_conjugate(spec.generator("T_B"), e3, spec)
        assert h.is_pure_translation()
        assert list(h.c) == [0, 0, -1, 0]
        assert list(h.c) != e3


def test_c03_similarity_pullback(criterion, case):
    with criterion(3, "T_A*h = lambda^2 h and T_B*h = h at 100 points", 5.0):
        data = case("counterexample32")
        spec = parse_group_spec(data["group"])
        m = parse_metric_spec(data["metric"], spec.field)
        lam = q5("2 + sqrt5")
        r = rho(spec.generator("T_A"), spec.splitting)
        assert r.exact == lam
        pts = sample_points(m.coords, 100, 7, (-2, 2), m.positive, (0.25, 3))
        assert max(equivariance_residual(spec.generator("T_A"), m, lam, x) for x in pts) < 1e-9
        assert max(equivariance_residual(spec.generator("T_B"), m, 1, x) for x in pts) < 1e-12


def test_c04_modulus_classes(criterion):
    with criterion(4, "certified modulus classes", 1.0):
        for A, lam in (([[1, 2], [2, 3]], "2 + sqrt5"), (A0, "(3 + sqrt5)/2")):
            classes = modulus_classes(A)
            assert len(classes) == 2
            top = classes[0]
            assert top.modulus.width < 1e-12
            assert top.modulus.overlaps(nf_embed(q5(lam), Fraction(1, 10 ** 20)))
            assert top.members[0].poly(q5(lam)) == 0
        # complex conjugates share a class, diag(2, -2) merges opposite signs
        assert len(modulus_classes([[0, -1], [1, 0]])) == 1
        assert len(modulus_classes([[2, 0], [0, -2]])) == 1
        assert len(modulus_classes([[2, 0], [0, 3]])) == 2


def test_c05_block_decomposition(criterion):
    with criterion(5, "4x4 matrix splits into two x^2-4x-1 blocks", 1.0):
        bd = block_decompose(A32)
        assert len(bd.blocks) == 2
        assert all(str(b.poly) == "x^2 - 4*x - 1" and b.matrix.shape == (2, 2) for b in bd.blocks)
        assert bd.reassemble() == Matrix.rational(A32)


def test_c06_semisimplicity_gate(criterion):
    with criterion(6, "semi-simplicity gate", 1.0):
        assert is_semisimple(A0)
        assert is_semisimple([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
        res = is_semisimple([[1, 1], [0, 1]])
        assert not res
        assert [(str(f), m) for f, m in res.repeated_factors] == [("x - 1", 2)]


def test_c07_density(criterion):
    with criterion(7, "eigenline of A0 dense, rational line not", 1.0):
        v = [Q5.one, q5("(1 + sqrt5)/2")]
        hull = rational_hull([v], 2)
        assert hull.is_full()
        line = rational_hull([[1, 0]], 2)
        assert line.dim == 1 and not line.is_full()
        assert [list(x) for x in line.lattice.vectors()] == [[1, 0]]
        assert density_check([v], 2)


def test_c08_withorbifold(criterion, case):
    with criterion(8, "withorbifold admissible; translation (0,1) breaks fixed-point freeness", 1.0):
        group = case("withorbifold")["group"]
        rep = check_admissible(parse_group_spec(group))
        assert rep.passed
        assert rep["fiber_fixed_point_free"].verdict == "PASS"
        group["generators"][0]["translation"]["const"] = ["0", "1"]
        group["relations"][0]["equals"] = {"translation": ["0", "2"]}
        bad = check_admissible(parse_group_spec(group))
        assert not bad.passed
        assert [h.hypothesis for h in bad.hypotheses if h.mandatory and h.verdict != "PASS"] == \
            ["fiber_fixed_point_free"]


def test_c09_big_example(criterion, case):
    with criterion(9, "big example: relations, frames, bracket, obstruction", 10.0):
        data = case("bigexample53")
        spec = parse_group_spec(data["group"])
        results = {r.name: r for r in verify_all(spec)}
        assert all(r.strict_pass for r in results.values())
        assert results["[T1,Z]"].residual == ["0", "0", "1", "0"]
        assert results["[T2,Z]"].residual == ["0", "0", "0", "1"]
        assert results["[T1,T2]"].residual == ["0", "0", "0", "0"]

        checks = data["checks"]
        m = parse_metric_spec(data["metric"], spec.field)
        consts = {Q5.name: Q5.gen}
        pts = sample_points(m.coords, 50, 11, (-2, 2), m.positive, (0.25, 3))
        frame = [parse_field(X, m.coords, consts) for X in checks["frame"]]
        coframe = [parse_field(t, m.coords, consts) for t in checks["coframe"]]
        assert max(frame_orthonormality(frame, m, x).residual for x in pts) < 1e-9
        assert max(dual_frame_check(frame, coframe, x, m.coords).residual for x in pts) < 1e-10

        X = parse_field({"w1": "1"}, m.coords)
        Y = parse_field({"v1": "w1", "v2": "w2", "z": "1"}, m.coords)
        assert {k: str(v) for k, v in lie_bracket(X, Y, m.coords).items()} == {"v1": "1"}
        target = field_values(parse_field({"v1": "1"}, m.coords), m.coords, pts[0])
        assert max(np.max(np.abs(lie_bracket_fd(X, Y, x, 1e-4, m.coords) - target)) for x in pts) < 1e-6

        # central differences are exact on affine fields; decay shows on a cubic pair
        Xc = parse_field({"w1": "t^3"}, m.coords)
        Yc = parse_field({"v1": "w1^3", "t": "w1*t^2"}, m.coords)
        exact = lie_bracket(Xc, Yc, m.coords)
        errs = [max(np.max(np.abs(lie_bracket_fd(Xc, Yc, x, h, m.coords) - field_values(exact, m.coords, x)))
                    for x in pts) for h in (0.02, 0.01, 0.005)]
        assert all(3.6 < a / b < 4.4 for a, b in zip(errs, errs[1:]))

        ob = constant_translation_obstruction(spec, ("T1", "Z"), checks["obstruction"]["sections"])
        assert ob.commutator == ["0", "0", "1", "0"] and ob.obstructed


def _closed_form(x, lam, center, radius, window=80):
    w, t = x
    total = np.zeros((2, 2))
    for n in range(-window, window + 1):
        chi = max(0.0, 1.0 - (lam ** n * t - center) ** 2 / radius ** 2) ** 4
        total += chi * np.diag([lam ** (-4 * n), 1.0])
    return total


def test_c10_averaging(criterion, case):
    with criterion(10, "averaged metric matches the closed form and is equivariant", 5.0):
        data = case("averaging-demo")
        _, _, coords, action, seed, bump, ratio = _averaging_setup(data)
        lam = (3 + math.sqrt(5)) / 2
        center, radius = (5 + math.sqrt(5)) / 4, (2 + math.sqrt(5)) / 4
        rng = np.random.default_rng(3)
        pts = [[rng.uniform(-2, 2), math.exp(rng.uniform(-3, 3))] for _ in range(50)]
        worst_oracle = worst_eq = 0.0
        fn = lambda y: average_metric(action, seed, bump, y, coords).matrix
        for x in pts:
            g = fn(x)
            ref = _closed_form(x, lam, center, radius)
            assert np.all(np.linalg.eigvalsh(g) > 0)
            worst_oracle = max(worst_oracle, np.max(np.abs(g - ref)) / np.max(np.abs(ref)))
            pb = pullback_metric(action.generator, fn, x)
            worst_eq = max(worst_eq, np.max(np.abs(pb - lam ** 2 * g)) / np.max(np.abs(g)))
        assert worst_oracle < 1e-10
        assert worst_eq < 1e-8


def test_c11_split_extension(criterion, case):
    with criterion(11, "rho = (1,1,1,lambda), section and kernel, homomorphism on 200 words", 5.0):
        spec = parse_group_spec(case("bigexample53")["group"])
        ratios = {n: rho(g, spec.splitting) for n, g in spec.generators.items()}
        lam = q5("(3 + sqrt5)/2")
        assert [ratios[n].squared for n in ("T1", "T2", "Z", "T")] == [1, 1, 1, lam * lam]
        se = split_extension(spec)
        assert se.verified and se.section == ["T^1"]
        assert rho_word(se.section, spec).squared == lam * lam
        assert all(rho_word(w, spec).is_one() for w in se.kernel)
        rng = random.Random(5)
        names = list(spec.generators)
        for _ in range(200):
            word = [f"{rng.choice(names)}^{rng.choice((1, -1))}" for _ in range(rng.randint(1, 6))]
            expected = None
            for tok in word:
                n, e = tok.split("^")
                r = ratios[n] if e == "1" else ratios[n].inverse()
                expected = r if expected is None else expected * r
            assert rho_word(word, spec) == expected


IRREDUCIBLES = [Poly(c) for c in ([0, 1], [1, 1], [-1, 1], [1, 2], [1, 0, 1], [-2, 0, 1], [1, 1, 1],
                                   [-1, -1, 1], [-2, 0, 0, 1], [1, 0, 0, 0, 1], [3, 0, 2], [1, -1, 1],
                                   [-5, 0, 1], [1, 1, 0, 1])]


def _is_hnf(H):
    rows = [list(r) for r in H.rows]
    last = -1
    zero_seen = False
    for r in rows:
        nz = [j for j, x in enumerate(r) if x != 0]
        if not nz:
            zero_seen = True
            continue
        if zero_seen or nz[0] <= last or r[nz[0]] <= 0:
            return False
        piv = nz[0]
        if any(not 0 <= rows[i][piv] < r[piv] for i in range(rows.index(r))):
            return False
        last = piv
    return True


def test_c12_normal_form_suite(criterion):
    with criterion(12, "HNF/SNF on 1000 matrices, factorization on 200 products", 60.0):
        rng = random.Random(12)
        for _ in range(1000):
            m, n = rng.randint(2, 6), rng.randint(2, 6)
            M = Matrix.rational([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
            H, U = hnf(M)
            assert U @ M == H and abs(U.det()) == 1 and _is_hnf(H)
            D, U, V = snf(M)
            assert U @ M @ V == D and abs(U.det()) == 1 and abs(V.det()) == 1
            d = [D[i, i] for i in range(min(m, n))]
            assert all(D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
            assert all(x >= 0 for x in d)
            assert all((b == 0) if a == 0 else b % a == 0 for a, b in zip(d, d[1:]))
        for _ in range(200):
            picks = {}
            for f in rng.sample(IRREDUCIBLES, rng.randint(1, 4)):
                picks[f] = rng.randint(1, 3)
            unit = rng.choice((1, -1, 2, -3))
            p = Poly([unit])
            for f, k in picks.items():
                p = p * f ** k
            u, fs = factor_with_content(p)
            assert expand_factors(u, fs) == p
            norm = {}
            for f, k in picks.items():
                g = f if f.lc > 0 else -f
                norm[g] = k
            assert {f: k for f, k in fs} == norm
