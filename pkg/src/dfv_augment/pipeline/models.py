"""파이프라인 단계 결과 모델."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from dfv_augment.common import DatasetSplit, ImageItem, Occluder, OcclusionPattern
from dfv_augment.config import ExperimentConfig
from dfv_augment.evalgeo import EvalReport, GeometryReport
from dfv_augment.occlusion import PatternRenderer
from dfv_augment.trainer import TrainRunRecord


@dataclass(frozen=True, eq=False)
class ExperimentData:
    """설정에서 해석된 이미지 카탈로그, 가림 물체, 분할."""

    config: ExperimentConfig
    catalog: dict[str, ImageItem]
    occluders: tuple[Occluder, ...]
    split: DatasetSplit
    renderer: PatternRenderer

    @property
    def patterns(self) -> dict[str, OcclusionPattern]:
        return {pattern.pattern_id: pattern for pattern in self.split.patterns}


@dataclass(frozen=True)
class SynthOutcome:
    manifest_path: Path
    split_path: Path
    image_count: int
    occluded_count: int
    occluder_files: tuple[Path, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class TrainOutcome:
    run_dir: Path
    record: TrainRunRecord
    checkpoint_path: Path
    pretrained_path: Path | None = None


@dataclass(frozen=True)
class EvalOutcome:
    report: EvalReport
    report_files: tuple[Path, ...]


@dataclass(frozen=True)
class GeometryOutcome:
    report: GeometryReport
    report_files: tuple[Path, ...]


@dataclass(frozen=True)
class ReproOutcome:
    """프로토콜 재현 결과. ``rows`` keeps the table order."""

    protocol: str
    rows: tuple[tuple[str, EvalReport], ...]
    reference: str
    comparison_files: tuple[Path, ...]
    warnings: tuple[str, ...] = field(default_factory=tuple)
