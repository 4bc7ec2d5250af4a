"""평가/기하 분석 결과 모델."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dfv_augment.common import PlacementKind

GroupKey = tuple[float, PlacementKind]


@dataclass(frozen=True)
class Prediction:
    image_id: str
    pattern_id: str
    true_label: int
    predicted: int


@dataclass(frozen=True)
class EvalReport:
    """Top-1 accuracies in the clean / per-pattern / per-group / average layout.

    ``avg_over_occlusion`` is the unweighted mean of ``per_pattern_acc``.
    Clean-set predictions carry an empty ``pattern_id``.
    """

    clean_acc: float
    per_pattern_acc: dict[str, float]
    group_acc: dict[GroupKey, float]
    avg_over_occlusion: float
    predictions: tuple[Prediction, ...] = ()


@dataclass(frozen=True)
class ReportDelta:
    """Elementwise ``b - a`` between two reports."""

    clean: float
    per_pattern: dict[str, float]
    group: dict[GroupKey, float]
    avg_over_occlusion: float


@dataclass(frozen=True, eq=False)
class FeatureCloud:
    """DFVs tagged by class, kind (clean / occluded / pseudo) and pattern."""

    vectors: np.ndarray
    labels: tuple[int, ...]
    kinds: tuple[str, ...]
    pattern_ids: tuple[str | None, ...]


@dataclass(frozen=True, eq=False)
class Projection:
    coords: np.ndarray
    components: np.ndarray
    mean: np.ndarray
    explained_variance_ratio: tuple[float, float]


@dataclass(frozen=True)
class GeometryReport:
    metric: str
    intra: dict[str, float]
    inter: float
    fraction_intra_below_inter: float
    clean_dfv_mean_norm: float | None = None

    @property
    def patterns(self) -> tuple[str, ...]:
        return tuple(self.intra)
