"""Evaluation and DV-geometry module."""

from .differ import compare_reports, delta_row, group_column
from .geometry import METRICS, Metric, dv_geometry, feature_cloud, project_2d
from .models import (
    EvalReport,
    FeatureCloud,
    GeometryReport,
    GroupKey,
    Prediction,
    Projection,
    ReportDelta,
)
from .reporter import (
    report_dict,
    report_rows,
    summary_row,
    write_comparison,
    write_eval_report,
    write_geometry_report,
    write_pool_stats,
)
from .service import evaluate, predict, report_from_predictions

__all__ = [
    "METRICS",
    "Metric",
    "EvalReport",
    "FeatureCloud",
    "GeometryReport",
    "GroupKey",
    "Prediction",
    "Projection",
    "ReportDelta",
    "compare_reports",
    "delta_row",
    "dv_geometry",
    "evaluate",
    "feature_cloud",
    "group_column",
    "predict",
    "project_2d",
    "report_dict",
    "report_from_predictions",
    "report_rows",
    "summary_row",
    "write_comparison",
    "write_eval_report",
    "write_geometry_report",
    "write_pool_stats",
]
