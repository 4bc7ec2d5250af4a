"""Reporter for evaluation, geometry and comparison outputs (CSV + JSON)."""

from __future__ import annotations

import csv
import json
from collections.abc import Mapping, Sequence
from pathlib import Path

from dfv_augment.feataug import PoolStats

from .differ import compare_reports, delta_row, group_column
from .models import EvalReport, GeometryReport, Projection

Row = dict[str, object]


def report_rows(report: EvalReport) -> list[Row]:
    """One row per pattern, framed by the clean, per-group and average rows."""
    rows: list[Row] = [{"scope": "clean", "key": "", "accuracy": _acc(report.clean_acc)}]
    for pattern_id, accuracy in sorted(report.per_pattern_acc.items()):
        rows.append({"scope": "pattern", "key": pattern_id, "accuracy": _acc(accuracy)})
    for (ratio, kind), accuracy in report.group_acc.items():
        key = group_column(ratio, kind)
        rows.append({"scope": "group", "key": key, "accuracy": _acc(accuracy)})
    rows.append({"scope": "avg", "key": "", "accuracy": _acc(report.avg_over_occlusion)})
    return rows


def report_dict(report: EvalReport) -> dict[str, object]:
    return {
        "clean_acc": report.clean_acc,
        "per_pattern_acc": dict(sorted(report.per_pattern_acc.items())),
        "group_acc": {
            group_column(ratio, kind): value for (ratio, kind), value in report.group_acc.items()
        },
        "avg_over_occlusion": report.avg_over_occlusion,
    }


def write_eval_report(output_dir: Path, report: EvalReport) -> tuple[Path, ...]:
    """Writes report.csv, report.json and the raw predictions.csv."""
    output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = output_dir / "report.csv"
    _write_csv(csv_path, report_rows(report))
    json_path = output_dir / "report.json"
    _write_json(json_path, report_dict(report))
    predictions_path = output_dir / "predictions.csv"
    _write_csv(
        predictions_path,
        [
            {
                "image_id": item.image_id,
                "pattern_id": item.pattern_id,
                "true": item.true_label,
                "predicted": item.predicted,
            }
            for item in report.predictions
        ],
    )
    return csv_path, json_path, predictions_path


def write_geometry_report(
    output_dir: Path,
    report: GeometryReport,
    projection: Projection | None = None,
    projection_ids: Sequence[str] = (),
) -> tuple[Path, ...]:
    output_dir.mkdir(parents=True, exist_ok=True)
    rows: list[Row] = [
        {
            "pattern_id": pattern_id,
            "intra": _dist(intra),
            "inter": _dist(report.inter),
            "intra_below_inter": int(intra < report.inter),
        }
        for pattern_id, intra in report.intra.items()
    ]
    csv_path = output_dir / "geometry.csv"
    _write_csv(csv_path, rows)

    payload: dict[str, object] = {
        "metric": report.metric,
        "intra": report.intra,
        "inter": report.inter,
        "fraction_intra_below_inter": report.fraction_intra_below_inter,
        "clean_dfv_mean_norm": report.clean_dfv_mean_norm,
    }
    written = [csv_path]
    if projection is not None:
        payload["explained_variance_ratio"] = list(projection.explained_variance_ratio)
        projection_path = output_dir / "projection.csv"
        ids = list(projection_ids) or [""] * len(projection.coords)
        _write_csv(
            projection_path,
            [
                {"pattern_id": pattern_id, "x": _dist(float(x)), "y": _dist(float(y))}
                for pattern_id, (x, y) in zip(ids, projection.coords)
            ],
        )
        written.append(projection_path)
    json_path = output_dir / "geometry.json"
    _write_json(json_path, payload)
    written.append(json_path)
    return tuple(written)


def write_pool_stats(path: Path, stats: PoolStats) -> Path:
    _write_csv(
        path,
        [
            {
                "pattern_id": pattern_id,
                "count": stats.counts[pattern_id],
                "mean_norm": _dist(stats.mean_norms[pattern_id]),
            }
            for pattern_id in stats.patterns
        ],
    )
    return path


def summary_row(name: str, report: EvalReport) -> Row:
    """Comparison-table row with accuracies in percent."""
    row: Row = {"name": name, "clean": _percent(report.clean_acc)}
    for (ratio, kind), value in report.group_acc.items():
        row[group_column(ratio, kind)] = _percent(value)
    row["avg_over_occlusion"] = _percent(report.avg_over_occlusion)
    return row


def write_comparison(
    output_dir: Path,
    protocol: str,
    rows: Sequence[tuple[str, EvalReport]],
    reference: str,
    params: Mapping[str, Mapping[str, float]] | None = None,
) -> tuple[Path, ...]:
    """Writes the protocol table: one row per model, then deltas against ``reference``.

    ``params`` adds per-row columns such as alpha/beta for the sweep.
    """
    by_name = dict(rows)
    base = by_name[reference]
    params = params or {}
    param_keys = sorted({key for values in params.values() for key in values})

    table: list[Row] = []
    for name, report in rows:
        row = summary_row(name, report)
        for key in param_keys:
            row[key] = params.get(name, {}).get(key, "")
        table.append(row)
    deltas = [
        (name, compare_reports(base, report)) for name, report in rows if name != reference
    ]
    table.extend(delta_row(f"{name} vs {reference}", delta) for name, delta in deltas)

    csv_path = output_dir / "comparison.csv"
    output_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(csv_path, table)

    json_path = output_dir / "comparison.json"
    _write_json(
        json_path,
        {
            "protocol": protocol,
            "reference": reference,
            "rows": [
                {"name": name, "params": dict(params.get(name, {})), **report_dict(report)}
                for name, report in rows
            ],
            "deltas": [
                {
                    "name": name,
                    "against": reference,
                    "clean": delta.clean,
                    "avg_over_occlusion": delta.avg_over_occlusion,
                }
                for name, delta in deltas
            ],
        },
    )
    return csv_path, json_path


def _acc(value: float) -> str:
    return f"{value:.6f}"


def _percent(value: float) -> str:
    return f"{value * 100:.2f}"


def _dist(value: float) -> str:
    return f"{value:.6f}"


def _write_json(path: Path, payload: Mapping[str, object]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_csv(path: Path, rows: list[Row]) -> None:
    fieldnames: list[str]
    if rows:
        first_keys = list(rows[0].keys())
        extra_keys = [key for row in rows for key in row if key not in first_keys]
        fieldnames = first_keys + list(dict.fromkeys(extra_keys))
    else:
        fieldnames = ["empty"]
        rows = [{"empty": ""}]

    with path.open("w", encoding="utf-8", newline="") as file_obj:
        writer = csv.DictWriter(file_obj, fieldnames=fieldnames, restval="", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
