"""Vector fields, 1-forms, Lie brackets and frame checks.

Fields and forms are dicts ``coord -> expression``; missing coordinates are 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidInput
from ..expr import Expr, parse
from .spec import MetricSpec, eval_metric


def parse_field(data, coords, constants=None) -> dict:
    out = {}
    for c, e in data.items():
        if c not in coords:
            raise InvalidInput(f"unknown coordinate {c!r} in vector field or form")
        out[c] = e if isinstance(e, Expr) else parse(str(e), constants)
    return out


def _env(coords, x):
    if len(x) != len(coords):
        raise InvalidInput("point has the wrong dimension")
    return dict(zip(coords, (float(v) for v in x)))


def field_values(X: dict, coords, x) -> np.ndarray:
    env = _env(coords, x)
    return np.array([X[c].evaluate(env) if c in X else 0.0 for c in coords])


def lie_bracket(X: dict, Y: dict, coords) -> dict:
    """Exact [X, Y]^i = X(Y^i) − Y(X^i)."""
    out = {}
    for i in coords:
        s = Expr()
        for j in coords:
            if j in X and i in Y:
                s = s + X[j] * Y[i].diff(j)
            if j in Y and i in X:
                s = s - Y[j] * X[i].diff(j)
        if not s.is_zero():
            out[i] = s
    return out


def lie_bracket_fd(X: dict, Y: dict, x, h: float, coords) -> np.ndarray:
    """[X, Y](x) with every partial derivative taken by central differences."""
    x = np.asarray(x, dtype=float)
    n = len(coords)
    Xv, Yv = field_values(X, coords, x), field_values(Y, coords, x)
    dY = np.zeros((n, n))
    dX = np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        dY[:, j] = (field_values(Y, coords, x + e) - field_values(Y, coords, x - e)) / (2 * h)
        dX[:, j] = (field_values(X, coords, x + e) - field_values(X, coords, x - e)) / (2 * h)
    return dY @ Xv - dX @ Yv


@dataclass
class FrameCheck:
    gram: np.ndarray
    residual: float

    def to_json(self):
        return {"residual": self.residual, "gram": self.gram.tolist()}


def frame_orthonormality(frame, m: MetricSpec, x) -> FrameCheck:
    if len(frame) != m.dim:
        raise InvalidInput("frame size must equal the dimension")
    G = eval_metric(m, x)
    E = np.column_stack([field_values(X, m.coords, x) for X in frame])
    gram = E.T @ G @ E
    return FrameCheck(gram, float(np.max(np.abs(gram - np.eye(m.dim)))))


@dataclass
class DualFrameCheck:
    pairing: np.ndarray
    residual: float
    permutation: Optional[list] = None

    def to_json(self):
        return {"residual": self.residual, "permutation": self.permutation, "pairing": self.pairing.tolist()}


def dual_frame_check(frame, coframe, x, coords, tol: float = 1e-9) -> DualFrameCheck:
    """Pairing ⟨θ_i, e_j⟩; a permuted coframe is reported as a permutation."""
    if len(frame) != len(coframe):
        raise InvalidInput("frame and coframe sizes differ")
    E = np.column_stack([field_values(X, coords, x) for X in frame])
    T = np.vstack([field_values(th, coords, x) for th in coframe])
    P = T @ E
    n = len(frame)
    residual = float(np.max(np.abs(P - np.eye(n))))
    perm = None
    if residual > tol:
        rounded = np.rint(P)
        if np.max(np.abs(P - rounded)) < tol and all(sorted(r) == [0.0] * (n - 1) + [1.0] for r in rounded.tolist()) \
                and np.all(rounded.sum(axis=0) == 1):
            perm = [int(np.argmax(r)) for r in rounded]
    return DualFrameCheck(P, residual, perm)
