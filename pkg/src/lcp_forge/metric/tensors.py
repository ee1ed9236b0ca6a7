"""Pullbacks, the equivariance residual and ratio estimates."""

from __future__ import annotations

import numpy as np

from .maps import as_chart_map
from .spec import MetricSpec, eval_metric


def _metric_fn(m, certify):
    if isinstance(m, MetricSpec):
        return lambda y: eval_metric(m, y, certify)
    return m


def _chart_of(m):
    return m.chart if isinstance(m, MetricSpec) else None


def pullback_metric(f, m, x, certify: bool = False) -> np.ndarray:
    """(f*m)(x) = J(x)ᵀ m(f(x)) J(x); ``m`` is a MetricSpec or a callable."""
    F = as_chart_map(f, _chart_of(m))
    y = F.apply(x)
    J = F.jacobian(x)
    return J.T @ _metric_fn(m, certify)(y) @ J


def equivariance_residual(f, m, rho, x, certify: bool = False) -> float:
    """‖f*m(x) − ρ² m(x)‖_∞ / ‖m(x)‖_∞."""
    base = _metric_fn(m, certify)(np.asarray(x, dtype=float))
    pb = pullback_metric(f, m, x, certify)
    r = float(rho)
    return float(np.max(np.abs(pb - r * r * base)) / np.max(np.abs(base)))


def estimate_ratio(f, m, x) -> float:
    """√ of the largest generalized eigenvalue of f*m against m."""
    base = _metric_fn(m, False)(np.asarray(x, dtype=float))
    pb = pullback_metric(f, m, x)
    ev = np.linalg.eigvals(np.linalg.solve(base, pb))
    return float(np.sqrt(np.max(ev.real)))
