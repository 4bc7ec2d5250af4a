"""YAML/JSON 기반 실험 설정 로딩, 검증, 플래그 덮어쓰기."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import types
import typing
from pathlib import Path
from typing import Any, Literal, get_args, get_origin, get_type_hints

import yaml

from dfv_augment.common import ConfigError, PlacementKind
from dfv_augment.model import FINETUNE_DEPTHS
from dfv_augment.observability import get_logger
from dfv_augment.occlusion import PROCEDURAL_KINDS, SPLIT_MODES

from .models import ExperimentConfig, TrainConfig, TrainMode

logger = get_logger(__name__)

PLACEMENT_KINDS: tuple[str, ...] = get_args(PlacementKind)
TRAIN_MODES: tuple[str, ...] = get_args(TrainMode)

# Filled from the experiment seed instead of being read from file.
_DERIVED_FIELDS = {"train.seed"}


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Reads a YAML or JSON experiment file and validates every field."""
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}") from exc
    if data is None:
        data = {}
    logger.info("config loaded: path=%s", path)
    return config_from_dict(data)


def config_from_dict(payload: Any) -> ExperimentConfig:
    config = _build(ExperimentConfig, payload, "")
    config = dataclasses.replace(
        config, train=dataclasses.replace(config.train, seed=config.seed)
    )
    validate_config(config)
    return config


def config_to_dict(config: ExperimentConfig) -> dict[str, Any]:
    return _unbuild(config, "")  # type: ignore[no-any-return]


def config_json(config: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n"


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(config_json(config).encode("utf-8")).hexdigest()[:16]


def write_config_json(path: Path, config: ExperimentConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config_json(config), encoding="utf-8")
    return path


def apply_overrides(
    config: ExperimentConfig,
    *,
    seed: int | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    mode: str | None = None,
    epochs: int | None = None,
    depth: str | None = None,
    output_dir: str | None = None,
    train_mode: str | None = None,
) -> ExperimentConfig:
    """Flag values win over file values; ``None`` leaves a field untouched."""
    train_changes: dict[str, Any] = {}
    if alpha is not None:
        train_changes["alpha"] = alpha
    if beta is not None:
        train_changes["beta"] = beta
    if epochs is not None:
        train_changes["epochs"] = epochs
    if depth is not None:
        train_changes["finetune_depth"] = depth
    if train_mode is not None:
        train_changes["mode"] = train_mode

    changes: dict[str, Any] = {}
    if seed is not None:
        changes["seed"] = seed
        train_changes["seed"] = seed
    if output_dir is not None:
        changes["output_dir"] = output_dir
    if mode is not None:
        changes["split"] = dataclasses.replace(config.split, mode=mode)
    if train_changes:
        changes["train"] = dataclasses.replace(config.train, **train_changes)

    updated = dataclasses.replace(config, **changes) if changes else config
    validate_config(updated)
    return updated


def validate_config(config: ExperimentConfig) -> None:
    """Cross-field and range checks; raises ConfigError naming the dotted field."""
    dataset = config.dataset
    _require(
        dataset.source in ("builtin", "manifest"), "dataset.source", "must be builtin or manifest"
    )
    _require(dataset.num_classes >= 1, "dataset.num_classes", "must be >= 1")
    _require(dataset.images_per_class >= 2, "dataset.images_per_class", "must be >= 2")
    _require(dataset.image_size >= 8, "dataset.image_size", "must be >= 8")
    if dataset.source == "manifest":
        _require(bool(dataset.manifest), "dataset.manifest", "required when source is manifest")

    occluders = config.occluders
    for kind in occluders.kinds:
        _require(kind in PROCEDURAL_KINDS, "occluders.kinds", f"unknown kind {kind!r}")
    _require(
        bool(occluders.kinds) or bool(occluders.files),
        "occluders.kinds",
        "at least one procedural kind or occluder file is required",
    )
    _require(occluders.variants >= 1, "occluders.variants", "must be >= 1")

    patterns = config.patterns
    _require(bool(patterns.ratios), "patterns.ratios", "must not be empty")
    for ratio in patterns.ratios:
        _require(0.0 < ratio <= 1.0, "patterns.ratios", f"ratio {ratio} not in (0, 1]")
    _require(patterns.random_positions >= 0, "patterns.random_positions", "must be >= 0")
    _require(
        patterns.include_center or patterns.random_positions > 0,
        "patterns.random_positions",
        "the grid needs the center placement or at least one random position",
    )

    split = config.split
    _require(split.mode in SPLIT_MODES, "split.mode", f"must be one of {', '.join(SPLIT_MODES)}")
    for name in ("eval_classes", "op_classes", "trn_per_class", "tst_per_class",
                 "op_clean_per_class"):
        _require(getattr(split, name) >= 1, f"split.{name}", "must be >= 1")
    for ratio, kind in split.op_groups:
        _require(ratio in patterns.ratios, "split.op_groups", f"ratio {ratio} not in the grid")
        _require(kind in PLACEMENT_KINDS, "split.op_groups", f"unknown placement {kind!r}")
    _require(
        split.eval_classes <= dataset.num_classes or dataset.source == "manifest",
        "split.eval_classes",
        "exceeds dataset.num_classes",
    )
    if split.mode == "exclusive":
        _require(
            split.eval_classes + split.op_classes <= dataset.num_classes
            or dataset.source == "manifest",
            "split.op_classes",
            "eval_classes + op_classes exceeds dataset.num_classes",
        )
    else:
        _require(
            split.op_classes <= split.eval_classes,
            "split.op_classes",
            f"{split.mode} mode draws op classes from the evaluation classes",
        )
        _require(
            split.op_clean_per_class <= split.trn_per_class,
            "split.op_clean_per_class",
            "must not exceed split.trn_per_class",
        )
    if split.mode == "cross":
        _require(
            bool(occluders.op_ids) and bool(occluders.test_ids),
            "occluders.op_ids",
            "cross mode needs disjoint occluders.op_ids and occluders.test_ids",
        )
        _require(
            not set(occluders.op_ids) & set(occluders.test_ids),
            "occluders.test_ids",
            "must be disjoint from occluders.op_ids in cross mode",
        )

    _require(bool(config.model.channels), "model.channels", "must not be empty")
    _require(all(c >= 1 for c in config.model.channels), "model.channels", "widths must be >= 1")
    _require(config.model.kernel in (1, 3, 5), "model.kernel", "must be 1, 3 or 5")
    _require(
        dataset.image_size >> (len(config.model.channels) - 1) >= 1,
        "model.channels",
        "too many pooling stages for dataset.image_size",
    )

    validate_train_config(config.train)

    protocol = config.protocol
    _require(protocol.pretrain_epochs >= 0, "protocol.pretrain_epochs", "must be >= 0")
    _require(protocol.pretrain_lr >= 0, "protocol.pretrain_lr", "must be >= 0")
    _require(protocol.eval_batch_size >= 1, "protocol.eval_batch_size", "must be >= 1")
    _require(bool(protocol.sweep_alphas), "protocol.sweep_alphas", "must not be empty")
    _require(bool(protocol.sweep_betas), "protocol.sweep_betas", "must not be empty")
    for alpha in protocol.sweep_alphas:
        _require(0.0 <= alpha <= 1.0, "protocol.sweep_alphas", f"alpha {alpha} not in [0, 1]")
    for beta in protocol.sweep_betas:
        _require(beta >= 0.0, "protocol.sweep_betas", f"beta {beta} must be >= 0")

    _require(bool(config.output_dir), "output_dir", "must not be empty")
    _require(config.seed >= 0, "seed", "must be >= 0")


def validate_train_config(train: TrainConfig) -> None:
    _require(train.mode in TRAIN_MODES, "train.mode", "must be classical or augmented")
    _require(
        train.finetune_depth in FINETUNE_DEPTHS,
        "train.finetune_depth",
        f"must be one of {', '.join(FINETUNE_DEPTHS)}",
    )
    _require(0.0 <= train.alpha <= 1.0, "train.alpha", "must be in [0, 1]")
    _require(math.isfinite(train.beta) and train.beta >= 0.0, "train.beta", "must be >= 0")
    _require(math.isfinite(train.lr) and train.lr >= 0.0, "train.lr", "must be >= 0")
    _require(0.0 <= train.momentum < 1.0, "train.momentum", "must be in [0, 1)")
    _require(train.epochs >= 1, "train.epochs", "must be >= 1")
    _require(train.batch_size >= 1, "train.batch_size", "must be >= 1")
    _require(train.lr_step >= 0, "train.lr_step", "must be >= 0")
    _require(0.0 < train.lr_gamma <= 1.0, "train.lr_gamma", "must be in (0, 1]")


def _require(condition: bool, field: str, constraint: str) -> None:
    if not condition:
        raise ConfigError(field, constraint)


def _build(cls: type[Any], raw: Any, prefix: str) -> Any:
    if not isinstance(raw, dict):
        raise ConfigError(prefix or "config", "must be a mapping")
    hints = get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    for key in raw:
        if key not in names or _join(prefix, key) in _DERIVED_FIELDS:
            raise ConfigError(_join(prefix, str(key)), "unknown field")
    values = {
        name: _coerce(hints[name], raw[name], _join(prefix, name))
        for name in names
        if name in raw
    }
    return cls(**values)


def _coerce(hint: Any, value: Any, path: str) -> Any:
    origin = get_origin(hint)
    if dataclasses.is_dataclass(hint):
        return _build(hint, value, path)
    if origin is Literal:
        allowed = get_args(hint)
        if value not in allowed:
            raise ConfigError(path, f"must be one of {', '.join(map(str, allowed))}")
        return value
    if origin in (typing.Union, types.UnionType):
        raise ConfigError(path, "unsupported union field")
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, "must be a boolean")
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, "must be an integer")
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, "must be a number")
        if not math.isfinite(float(value)):
            raise ConfigError(path, "must be finite")
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigError(path, "must be a string")
        return value
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(path, "must be a list")
        args = get_args(hint)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_coerce(args[0], item, f"{path}[{i}]") for i, item in enumerate(value))
        if len(value) != len(args):
            raise ConfigError(path, f"must have exactly {len(args)} entries")
        return tuple(
            _coerce(arg, item, f"{path}[{i}]") for i, (arg, item) in enumerate(zip(args, value))
        )
    raise ConfigError(path, f"unsupported field type {hint!r}")


def _unbuild(value: Any, prefix: str) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: _unbuild(getattr(value, f.name), _join(prefix, f.name))
            for f in dataclasses.fields(value)
            if _join(prefix, f.name) not in _DERIVED_FIELDS
        }
    if isinstance(value, tuple):
        return [_unbuild(item, prefix) for item in value]
    return value


def _join(prefix: str, name: str) -> str:
    return f"{prefix}.{name}" if prefix else name
