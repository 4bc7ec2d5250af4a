"""실험 설정 로딩과 검증 테스트."""

from __future__ import annotations

from pathlib import Path

import pytest

from dfv_augment.common import ConfigError
from dfv_augment.config import (
    apply_overrides,
    config_from_dict,
    config_hash,
    config_to_dict,
    load_experiment_config,
    loader,
    write_config_json,
)
from dfv_augment.model import FINETUNE_DEPTHS
from dfv_augment.occlusion import PROCEDURAL_KINDS, SPLIT_MODES

EXPERIMENTS_DIR = Path(__file__).resolve().parents[2] / "configs" / "experiments"


@pytest.mark.parametrize("name", ["desk.yaml", "cross.yaml", "tiny.yaml"])
def test_bundled_experiment_configs_load(name: str) -> None:
    config = load_experiment_config(EXPERIMENTS_DIR / name)

    assert config.train.seed == config.seed
    assert config.output_dir


def test_cross_preset_uses_disjoint_occluders() -> None:
    config = load_experiment_config(EXPERIMENTS_DIR / "cross.yaml")

    assert config.split.mode == "cross"
    assert set(config.occluders.op_ids).isdisjoint(config.occluders.test_ids)


def test_empty_mapping_gives_defaults() -> None:
    config = config_from_dict({})

    assert config.train.alpha == 0.9
    assert config.train.beta == 1.0
    assert config.split.mode == "exclusive"


def test_yaml_fields_are_coerced(tmp_path: Path) -> None:
    path = tmp_path / "exp.yaml"
    path.write_text(
        "seed: 7\npatterns:\n  ratios: [1]\nsplit:\n  op_groups: [[1, center]]\n",
        encoding="utf-8",
    )

    config = load_experiment_config(path)

    assert config.seed == 7
    assert config.train.seed == 7
    assert config.patterns.ratios == (1.0,)
    assert config.split.op_groups == ((1.0, "center"),)


def test_unknown_key_names_the_dotted_field() -> None:
    with pytest.raises(ConfigError) as excinfo:
        config_from_dict({"train": {"learning_rate": 0.1}})

    assert excinfo.value.field == "train.learning_rate"


def test_train_seed_cannot_be_set_from_file() -> None:
    with pytest.raises(ConfigError) as excinfo:
        config_from_dict({"train": {"seed": 3}})

    assert excinfo.value.field == "train.seed"


@pytest.mark.parametrize(
    ("payload", "field"),
    [
        ({"train": {"epochs": 0}}, "train.epochs"),
        ({"train": {"alpha": 1.5}}, "train.alpha"),
        ({"train": {"beta": -1}}, "train.beta"),
        ({"train": {"mode": "mixed"}}, "train.mode"),
        ({"train": {"epochs": "ten"}}, "train.epochs"),
        ({"patterns": {"ratios": [0.0]}}, "patterns.ratios"),
        ({"split": {"eval_classes": 14, "op_classes": 5}}, "split.op_classes"),
        ({"occluders": {"kinds": ["spiral"]}}, "occluders.kinds"),
        ({"split": {"mode": "cross"}}, "occluders.op_ids"),
        ({"model": {"channels": []}}, "model.channels"),
        ({"seed": -1}, "seed"),
        ({"train": []}, "train"),
    ],
)
def test_invalid_values_name_their_field(payload: dict[str, object], field: str) -> None:
    with pytest.raises(ConfigError) as excinfo:
        config_from_dict(payload)

    assert excinfo.value.field == field


def test_cross_mode_rejects_shared_occluder_ids() -> None:
    payload = {
        "split": {"mode": "cross"},
        "occluders": {"op_ids": ["stripes-0"], "test_ids": ["stripes-0"]},
    }

    with pytest.raises(ConfigError) as excinfo:
        config_from_dict(payload)

    assert excinfo.value.field == "occluders.test_ids"


def test_missing_file_and_bad_yaml(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="file not found"):
        load_experiment_config(tmp_path / "missing.yaml")

    broken = tmp_path / "broken.yaml"
    broken.write_text("train: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_experiment_config(broken)


def test_overrides_win_over_file_values() -> None:
    config = config_from_dict({"seed": 1, "train": {"alpha": 0.5}})

    updated = apply_overrides(
        config, seed=9, alpha=0.0, beta=2.0, mode="inclusive", epochs=3, depth="head"
    )

    assert updated.seed == 9
    assert updated.train.seed == 9
    assert updated.train.alpha == 0.0
    assert updated.train.beta == 2.0
    assert updated.train.epochs == 3
    assert updated.train.finetune_depth == "head"
    assert updated.split.mode == "inclusive"
    assert apply_overrides(config) is config


def test_overrides_are_validated() -> None:
    with pytest.raises(ConfigError) as excinfo:
        apply_overrides(config_from_dict({}), epochs=0)

    assert excinfo.value.field == "train.epochs"


def test_config_round_trip_and_hash(tmp_path: Path) -> None:
    config = load_experiment_config(EXPERIMENTS_DIR / "tiny.yaml")

    payload = config_to_dict(config)
    rebuilt = config_from_dict(payload)
    path = write_config_json(tmp_path / "config.json", config)

    assert "seed" not in payload["train"]
    assert rebuilt == config
    assert config_hash(rebuilt) == config_hash(config)
    assert load_experiment_config(path) == config
    assert config_hash(apply_overrides(config, alpha=0.1)) != config_hash(config)


def test_config_choices_come_from_the_modules_that_use_them() -> None:
    assert loader.PROCEDURAL_KINDS is PROCEDURAL_KINDS
    assert loader.SPLIT_MODES is SPLIT_MODES
    assert loader.FINETUNE_DEPTHS is FINETUNE_DEPTHS
    assert loader.PLACEMENT_KINDS == ("center", "fixed", "random")
    assert loader.TRAIN_MODES == ("classical", "augmented")
