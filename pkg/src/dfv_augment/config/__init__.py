"""실험 설정 모듈."""

from .loader import (
    FINETUNE_DEPTHS,
    SPLIT_MODES,
    TRAIN_MODES,
    apply_overrides,
    config_from_dict,
    config_hash,
    config_json,
    config_to_dict,
    load_experiment_config,
    validate_config,
    validate_train_config,
    write_config_json,
)
from .models import (
    DatasetConfig,
    ExperimentConfig,
    ModelConfig,
    OccluderConfig,
    PatternGridConfig,
    ProtocolConfig,
    SplitConfig,
    TrainConfig,
)

__all__ = [
    "FINETUNE_DEPTHS",
    "SPLIT_MODES",
    "TRAIN_MODES",
    "DatasetConfig",
    "ExperimentConfig",
    "ModelConfig",
    "OccluderConfig",
    "PatternGridConfig",
    "ProtocolConfig",
    "SplitConfig",
    "TrainConfig",
    "apply_overrides",
    "config_from_dict",
    "config_hash",
    "config_json",
    "config_to_dict",
    "load_experiment_config",
    "validate_config",
    "validate_train_config",
    "write_config_json",
]
