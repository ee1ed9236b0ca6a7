"""Numerical metric checks: pullbacks, equivariance, averaging and frames."""

from .spec import Chart, MetricSpec, certify_positive_definite, eval_metric, euclidean_metric, parse_metric_spec
from .maps import AffineChartMap, ExprMap, as_chart_map, automorphism_chart_map
from .tensors import equivariance_residual, estimate_ratio, pullback_metric
from .averaging import AveragedMetric, BumpSpec, CyclicAction, average_metric, averaged_metric_fn
from .frames import (DualFrameCheck, FrameCheck, dual_frame_check, field_values, frame_orthonormality,
                     lie_bracket, lie_bracket_fd, parse_field)
from .sampling import SamplePlan, sample_points

__all__ = [
    "Chart", "MetricSpec", "certify_positive_definite", "eval_metric", "euclidean_metric", "parse_metric_spec",
    "AffineChartMap", "ExprMap", "as_chart_map", "automorphism_chart_map",
    "equivariance_residual", "estimate_ratio", "pullback_metric",
    "AveragedMetric", "BumpSpec", "CyclicAction", "average_metric", "averaged_metric_fn",
    "DualFrameCheck", "FrameCheck", "dual_frame_check", "field_values", "frame_orthonormality",
    "lie_bracket", "lie_bracket_fd", "parse_field",
    "SamplePlan", "sample_points",
]
