"""두 평가 리포트 간의 비교(diff) 기능."""

from __future__ import annotations

from collections.abc import Set as AbstractSet

from dfv_augment.common import DataError

from .models import EvalReport, ReportDelta


def compare_reports(a: EvalReport, b: EvalReport) -> ReportDelta:
    """리포트 a 대비 b의 정확도 차이(b - a)를 계산한다."""

    _require_same_keys("pattern", set(a.per_pattern_acc), set(b.per_pattern_acc))
    _require_same_keys("group", set(a.group_acc), set(b.group_acc))

    return ReportDelta(
        clean=b.clean_acc - a.clean_acc,
        per_pattern={
            pattern_id: b.per_pattern_acc[pattern_id] - a.per_pattern_acc[pattern_id]
            for pattern_id in sorted(a.per_pattern_acc)
        },
        group={key: b.group_acc[key] - a.group_acc[key] for key in sorted(a.group_acc)},
        avg_over_occlusion=b.avg_over_occlusion - a.avg_over_occlusion,
    )


def delta_row(name: str, delta: ReportDelta) -> dict[str, object]:
    """비교 테이블용 단일 행. 정확도 차이는 퍼센트 포인트로 표기한다."""

    row: dict[str, object] = {"name": name, "clean": _points(delta.clean)}
    for (ratio, kind), value in delta.group.items():
        row[group_column(ratio, kind)] = _points(value)
    row["avg_over_occlusion"] = _points(delta.avg_over_occlusion)
    return row


def group_column(ratio: float, kind: str) -> str:
    return f"r{round(ratio * 100):02d}_{kind}"


def _points(value: float) -> str:
    return f"{value * 100:+.2f}"


def _require_same_keys(label: str, old: AbstractSet[object], new: AbstractSet[object]) -> None:
    if old == new:
        return
    added = sorted(map(str, new - old))
    removed = sorted(map(str, old - new))
    raise DataError(f"reports cover different {label} sets: added={added} removed={removed}")
