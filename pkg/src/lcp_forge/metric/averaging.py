"""The averaged metric g_N = Σ ρ(ω)⁻² ω*(χ g) for cyclic groups.

Local finiteness is made effective by a declared displacement bound: the
generator raises a height function by at least δ, so only the powers whose
images meet the bump support in height can contribute.  The bound is
checked at every visited point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..errors import InvalidInput, TruncationUnsound
from .spec import MetricSpec, eval_metric


@dataclass
class BumpSpec:
    """χ = Σ_i max(0, 1 − |x − c_i|²/r_i²)^k over chart balls."""

    coords: tuple
    centers: list
    radii: list
    k: int = 4

    def __post_init__(self):
        if self.k < 4:
            raise InvalidInput("bump exponent must be at least 4")
        if len(self.centers) != len(self.radii) or not self.centers:
            raise InvalidInput("one radius per bump center is required")
        if any(r <= 0 for r in self.radii):
            raise InvalidInput("bump radii must be positive")

    def __call__(self, env: dict) -> float:
        total = 0.0
        for c, r in zip(self.centers, self.radii):
            d2 = sum((env[v] - c[i]) ** 2 for i, v in enumerate(self.coords))
            total += max(0.0, 1.0 - d2 / (r * r)) ** self.k
        return total

    def support_range(self, coord):
        i = self.coords.index(coord)
        return min(c[i] - r for c, r in zip(self.centers, self.radii)), \
            max(c[i] + r for c, r in zip(self.centers, self.radii))


@dataclass
class CyclicAction:
    """Ω = ⟨ω⟩ acting on the chart, with ρ(ω) and a height bound."""

    generator: object            # chart map with apply/jacobian/inverse
    ratio: float
    height: str                  # coordinate used as height
    displacement: float          # declared lower bound on height(ω y) − height(y)
    log_height: bool = False


@dataclass
class AveragedMetric:
    matrix: np.ndarray
    powers: list = dc_field(default_factory=list)
    degenerate: bool = False

    def to_json(self):
        return {"matrix": self.matrix.tolist(), "powers": self.powers, "degenerate": self.degenerate}


def _height(action, coords, y):
    v = y[coords.index(action.height)]
    if action.log_height:
        if v <= 0:
            raise TruncationUnsound("height coordinate left the positive domain")
        return math.log(v)
    return v


def _walk(action, coords, x, direction, hmin, hmax, max_terms):
    """Visit ω^{±n} x while the height can still meet [hmin, hmax]."""
    g = action.generator if direction > 0 else action.generator.inverse()
    y = np.asarray(x, dtype=float)
    J = np.eye(len(coords))
    n = 0
    out = []
    slack = 1e-12 * max(1.0, abs(action.displacement))
    while len(out) < max_terms:
        h = _height(action, coords, y)
        if (direction > 0 and h > hmax) or (direction < 0 and h < hmin):
            return out
        if n != 0 or direction > 0:
            out.append((n, y.copy(), J.copy()))
        J = g.jacobian(y) @ J
        y2 = g.apply(y)
        step = (_height(action, coords, y2) - h) * direction
        if step < action.displacement - slack:
            raise TruncationUnsound(f"displacement bound {action.displacement} violated: step {step}")
        y = y2
        n += direction
    raise TruncationUnsound("contributing set did not close within the term budget")


def average_metric(action: CyclicAction | None, seed, bump: BumpSpec, x, coords=None,
                   max_terms: int = 10_000) -> AveragedMetric:
    """Σ_n ρ^{−2n} χ(ωⁿx) J_nᵀ g(ωⁿx) J_n over the certified contributing powers."""
    if coords is None:
        if not isinstance(seed, MetricSpec):
            raise InvalidInput("coordinates are required with a callable seed metric")
        coords = seed.coords
    coords = tuple(coords)
    g = (lambda y: eval_metric(seed, y, certify=False)) if isinstance(seed, MetricSpec) else seed
    x = np.asarray(x, dtype=float)
    if action is None:
        visits = [(0, x, np.eye(len(coords)))]
        rho = 1.0
    else:
        lo, hi = bump.support_range(action.height)
        if action.log_height:
            if lo <= 0:
                raise TruncationUnsound("bump support reaches the boundary of the half-line")
            lo, hi = math.log(lo), math.log(hi)
        if action.displacement <= 0:
            raise TruncationUnsound("the displacement bound must be positive")
        visits = _walk(action, coords, x, 1, lo, hi, max_terms) + _walk(action, coords, x, -1, lo, hi, max_terms)
        rho = float(action.ratio)
    total = np.zeros((len(coords), len(coords)))
    powers = []
    for n, y, J in sorted(visits, key=lambda t: t[0]):
        chi = bump(dict(zip(coords, y)))
        if chi <= 0:
            continue
        powers.append(n)
        total += rho ** (-2 * n) * chi * (J.T @ g(y) @ J)
    return AveragedMetric(total, powers, not powers)


def averaged_metric_fn(action, seed, bump, coords=None):
    """The averaged metric as a callable, for pullback and residual checks."""
    return lambda y: average_metric(action, seed, bump, y, coords).matrix
