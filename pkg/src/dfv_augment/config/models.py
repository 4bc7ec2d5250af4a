"""실험 설정 모델."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

DatasetSource = Literal["builtin", "manifest"]
TrainMode = Literal["classical", "augmented"]


@dataclass(frozen=True)
class DatasetConfig:
    """데이터셋 소스 설정."""

    source: DatasetSource = "builtin"
    manifest: str = ""
    num_classes: int = 15
    images_per_class: int = 150
    image_size: int = 64


@dataclass(frozen=True)
class OccluderConfig:
    """가림 물체 설정.

    ``op_ids`` / ``test_ids`` restrict which occluders build the pair set and
    the occluded test set; empty means every occluder.
    """

    kinds: tuple[str, ...] = ("checkerboard", "stripes", "noise_blob")
    variants: int = 1
    files: tuple[str, ...] = ()
    op_ids: tuple[str, ...] = ()
    test_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class PatternGridConfig:
    """가림 패턴 격자 (비율 × 위치)."""

    ratios: tuple[float, ...] = (0.1, 0.2)
    random_positions: int = 1
    include_center: bool = True


@dataclass(frozen=True)
class SplitConfig:
    """이미지 집합 분할 설정."""

    mode: Literal["exclusive", "inclusive", "cross"] = "exclusive"
    eval_classes: int = 10
    op_classes: int = 5
    trn_per_class: int = 100
    tst_per_class: int = 50
    op_clean_per_class: int = 10
    op_groups: tuple[tuple[float, str], ...] = ()


@dataclass(frozen=True)
class TrainConfig:
    """학습 설정. ``seed`` is filled from the experiment seed, never read from file."""

    mode: TrainMode = "augmented"
    alpha: float = 0.9
    beta: float = 1.0
    lr: float = 0.01
    momentum: float = 0.9
    epochs: int = 10
    batch_size: int = 32
    seed: int = 0
    finetune_depth: Literal["head", "last", "all"] = "all"
    hflip: bool = True
    affine: bool = True
    lr_step: int = 0
    lr_gamma: float = 0.1


@dataclass(frozen=True)
class ModelConfig:
    channels: tuple[int, ...] = (16, 32, 64)
    kernel: int = 3


@dataclass(frozen=True)
class ProtocolConfig:
    """재현 프로토콜 설정."""

    pretrain_epochs: int = 8
    pretrain_lr: float = 0.05
    eval_batch_size: int = 128
    sweep_alphas: tuple[float, ...] = (0.9,)
    sweep_betas: tuple[float, ...] = (0.25, 1.0, 4.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """최상위 실험 설정."""

    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    occluders: OccluderConfig = field(default_factory=OccluderConfig)
    patterns: PatternGridConfig = field(default_factory=PatternGridConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    output_dir: str = "runs"
    seed: int = 0
