"""Chart maps with Jacobians: expression maps and affine maps from bundle automorphisms."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInput
from ..expr import Expr, parse
from ..linalg.matrix import Matrix
from .spec import Chart


class ExprMap:
    """u ↦ (e_1(u), …, e_n(u)) with Jacobian from exact derivatives."""

    def __init__(self, coords, images, inverse_images=None, constants=None):
        self.coords = tuple(coords)
        self.images = [parse(e, constants) if not isinstance(e, Expr) else e for e in images]
        if len(self.images) != len(self.coords):
            raise InvalidInput("a chart map needs one image per coordinate")
        self.jac = [[e.diff(c) for c in self.coords] for e in self.images]
        self._inverse_images = inverse_images
        self._constants = constants

    def apply(self, x):
        env = dict(zip(self.coords, (float(v) for v in x)))
        return np.array([e.evaluate(env) for e in self.images])

    def jacobian(self, x):
        env = dict(zip(self.coords, (float(v) for v in x)))
        return np.array([[d.evaluate(env) for d in row] for row in self.jac])

    def inverse(self):
        if self._inverse_images is None:
            raise InvalidInput("no inverse declared for this map")
        return ExprMap(self.coords, self._inverse_images, self.images, self._constants)

    def compose(self, g: "ExprMap") -> "ExprMap":
        """self ∘ g."""
        sub = dict(zip(self.coords, g.images))
        return ExprMap(self.coords, [e.substitute(sub) for e in self.images])


class AffineChartMap:
    """u ↦ M u + e, kept exactly and as floats."""

    def __init__(self, M: Matrix, e, name=""):
        self.M = M
        self.e = list(e)
        self.name = name
        self.Mf = np.array([[float(x) for x in r] for r in M.rows])
        self.ef = np.array([float(x) for x in self.e])

    def apply(self, x):
        return self.Mf @ np.asarray(x, dtype=float) + self.ef

    def jacobian(self, x=None):
        return self.Mf

    def inverse(self) -> "AffineChartMap":
        Mi = self.M.inverse()
        return AffineChartMap(Mi, [-v for v in Mi @ self.e], self.name + "^-1")

    def compose(self, g: "AffineChartMap") -> "AffineChartMap":
        e = [a + b for a, b in zip(self.M @ g.e, self.e)]
        return AffineChartMap(self.M @ g.M, e)


def automorphism_chart_map(f, chart: Chart | None = None) -> AffineChartMap:
    """The bundle map (a, x) ↦ (A a + c + L x, B x + d) written in metric coordinates."""
    K = f.K
    p, n = f.p, f.base.dim
    top = [list(f.A.over(K).row(i)) + list(f.L.row(i)) for i in range(p)]
    bot = [[K.zero] * p + list(f.base_action.B.row(i)) for i in range(n)]
    F = Matrix(top + bot, ncols=p + n, field=K)
    e = list(f.c) + list(f.base_action.d)
    if chart is None:
        return AffineChartMap(F, e, f.name)
    S = chart.matrix if chart.matrix.field == K else chart.matrix.over(K)
    if S.nrows != p + n:
        raise InvalidInput("chart dimension does not match the bundle")
    Si = S.inverse()
    return AffineChartMap(Si @ F @ S, list(Si @ e), f.name)


def as_chart_map(f, chart: Chart | None = None):
    if isinstance(f, (ExprMap, AffineChartMap)):
        return f
    if hasattr(f, "base_action"):
        return automorphism_chart_map(f, chart)
    raise InvalidInput(f"cannot use {type(f).__name__} as a chart map")
