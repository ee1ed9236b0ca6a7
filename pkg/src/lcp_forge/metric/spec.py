"""Metrics given by chart expressions, with certified positive-definiteness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import iv

from ..errors import InvalidInput
from ..expr import PI, Expr, parse
from ..linalg.matrix import Matrix
from ..numfield.field import NFElement, NumberField, nf_embed


def _constants(K: NumberField | None):
    return {K.name: K.gen} if K is not None else {}


@dataclass
class Chart:
    """Bundle coordinates = blockdiag(S_fiber, S_base) · metric coordinates."""

    matrix: Matrix                       # exact, over the field of the spec
    fiber_dim: int

    @property
    def numeric(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.matrix.rows])

    @classmethod
    def identity(cls, n, fiber_dim, K=None):
        return cls(Matrix.identity(n, K) if K is not None else Matrix.identity(n), fiber_dim)


@dataclass
class MetricSpec:
    coords: tuple
    entries: list                        # n × n list of Expr
    positive: tuple = ()
    chart: Chart | None = None
    name: str = ""
    field: NumberField | None = None

    def __post_init__(self):
        n = len(self.coords)
        if len(set(self.coords)) != n:
            raise InvalidInput("metric coordinates must be distinct")
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise InvalidInput(f"metric entries must form a {n}x{n} matrix")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InvalidInput(f"metric is not symmetric at ({i}, {j})")
        allowed = set(self.coords) | {PI}
        for r in self.entries:
            for e in r:
                extra = set(e.variables()) - allowed
                if extra:
                    raise InvalidInput(f"metric entry uses unknown names {sorted(extra)}")
                for v in e.negative_power_vars():
                    if v != PI and v not in self.positive:
                        raise InvalidInput(f"negative power of {v}, which is not declared positive")

    @property
    def dim(self):
        return len(self.coords)

    def env(self, x):
        if len(x) != self.dim:
            raise InvalidInput(f"point has {len(x)} coordinates, expected {self.dim}")
        env = dict(zip(self.coords, (float(v) for v in x)))
        for c in self.positive:
            if not env[c] > 0:
                raise InvalidInput(f"coordinate {c} must be positive, got {env[c]}")
        return env


def parse_metric_spec(data: dict, field: NumberField | None = None) -> MetricSpec:
    try:
        coords = tuple(data["coords"])
        consts = _constants(field)
        n = len(coords)
        if "entries" in data:
            entries = [[parse(str(x), consts) for x in r] for r in data["entries"]]
        elif "diag" in data:
            diag = data["diag"]
            if len(diag) != n:
                raise InvalidInput("diag length does not match the coordinates")
            entries = [[parse(str(diag[i]), consts) if i == j else Expr() for j in range(n)] for i in range(n)]
        else:
            raise InvalidInput("metric needs 'entries' or 'diag'")
        chart = None
        if "chart" in data:
            chart = _parse_chart(data["chart"], n, field, consts)
        return MetricSpec(coords, entries, tuple(data.get("positive", ())), chart, data.get("name", ""), field)
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed metric spec: {exc!r}") from exc


def _scalar(s, consts, field):
    e = parse(str(s), consts)
    if not e.is_constant():
        raise InvalidInput(f"chart entry {s!r} is not a constant")
    v = e.constant_value()
    return field.coerce(v) if field is not None else Fraction(v)


def _parse_chart(data, n, field, consts):
    fib = [[_scalar(x, consts, field) for x in col] for col in data["fiber_basis"]]
    p = len(fib)
    base = data.get("base_basis")
    m = n - p
    if base is None:
        base = [[1 if i == j else 0 for i in range(m)] for j in range(m)]
    bas = [[_scalar(x, consts, field) for x in col] for col in base]
    if any(len(c) != p for c in fib) or len(bas) != m or any(len(c) != m for c in bas):
        raise InvalidInput("chart bases have the wrong shape")
    K = field
    Sf = Matrix.from_columns(fib, field=K) if K is not None else Matrix.from_columns(fib)
    Sb = Matrix.from_columns(bas, field=K) if K is not None else Matrix.from_columns(bas)
    S = Matrix.block_diag([Sf, Sb], K) if K is not None else Matrix.block_diag([Sf, Sb])
    if S.rank() != n:
        raise InvalidInput("chart matrix is singular")
    return Chart(S, p)


# -- evaluation ---------------------------------------------------------------

def _iv_coeff(c):
    if isinstance(c, Fraction) or isinstance(c, int):
        c = Fraction(c)
        return iv.mpf(c.numerator) / c.denominator
    if isinstance(c, NFElement):
        enc = nf_embed(c, Fraction(1, 10 ** 30))
        lo, hi = enc.lo, enc.hi
        return iv.mpf([(iv.mpf(lo.numerator) / lo.denominator).a, (iv.mpf(hi.numerator) / hi.denominator).b])
    raise InvalidInput(f"cannot enclose coefficient {c!r}")


def iv_evaluate(e: Expr, env: dict):
    """Interval enclosure of an expression at a point given by floats."""
    total = iv.mpf(0)
    for k, c in e.terms.items():
        t = _iv_coeff(c)
        for v, p in k:
            x = iv.pi if v == PI and v not in env else iv.mpf(env[v])
            t = t * (x ** p if p >= 0 else 1 / x ** (-p))
        total = total + t
    return total


def certify_positive_definite(rows) -> bool:
    """Interval Gaussian elimination: every pivot certified positive."""
    a = [list(r) for r in rows]
    n = len(a)
    for k in range(n):
        piv = a[k][k]
        if not piv.a > 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / piv
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return True


def eval_metric(m: MetricSpec, x, certify: bool = True) -> np.ndarray:
    """Numeric metric matrix at x; raises when x leaves the domain or positivity fails."""
    env = m.env(x)
    n = m.dim
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = m.entries[i][j].evaluate(env)
    if certify:
        enc = [[iv_evaluate(m.entries[i][j], env) for j in range(n)] for i in range(n)]
        if not certify_positive_definite(enc):
            raise InvalidInput(f"metric is not certified positive definite at {list(x)}")
    return G


def euclidean_metric(coords) -> MetricSpec:
    n = len(coords)
    return MetricSpec(tuple(coords), [[Expr.const(Fraction(1)) if i == j else Expr() for j in range(n)]
                                      for i in range(n)])
