"""분류 학습과 DFV 증강 학습 테스트."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from dfv_augment.common import ConfigError, DataError, ImagePair, LabelledSet
from dfv_augment.config import TrainConfig
from dfv_augment.model import ArchSpec, MicroNet, to_batch
from dfv_augment.occlusion import (
    PatternRenderer,
    build_pairs,
    builtin_glyph_dataset,
    make_patterns,
    procedural_occluders,
)
from dfv_augment.trainer import (
    augment_image,
    dataset_loss,
    learning_rate,
    load_checkpoint,
    save_checkpoint,
    train_augmented,
    train_classical,
    train_model,
)

ARCH = ArchSpec(image_size=16, channels=(4, 8, 6), num_classes=3)


def _training_set() -> LabelledSet:
    items = builtin_glyph_dataset(3, 4, 16, seed=0)
    return LabelledSet(
        ids=tuple(item.item_id for item in items),
        images=tuple(item.pixels for item in items),
        labels=np.asarray([item.class_id for item in items], dtype=np.int64),
    )


def _op_pairs() -> list[ImagePair]:
    items = builtin_glyph_dataset(5, 1, 16, seed=1)[3:]
    occluders = procedural_occluders(["checkerboard", "stripes"], seed=0)
    renderer = PatternRenderer(occluders, (16, 16))
    patterns = make_patterns([occ.occluder_id for occ in occluders], [0.2], 1, seed=0)
    return build_pairs(items, patterns, renderer)


def _cfg(**changes: object) -> TrainConfig:
    base = TrainConfig(
        mode="augmented", alpha=0.9, beta=1.0, lr=0.05, epochs=2, batch_size=4, seed=3
    )
    return replace(base, **changes)  # type: ignore[arg-type]


def _arrays(model: MicroNet) -> dict[str, bytes]:
    return {name: tensor.data.tobytes() for name, tensor in model.params.items()}


def test_zero_learning_rate_leaves_weights_unchanged() -> None:
    model = MicroNet.initialize(ARCH, seed=0)
    before = _arrays(model)

    train_augmented(model, _training_set(), _op_pairs(), _cfg(lr=0.0))

    assert _arrays(model) == before


def test_alpha_zero_is_bit_identical_to_classical(tmp_path: Path) -> None:
    augmented, _ = train_augmented(
        MicroNet.initialize(ARCH, seed=0),
        _training_set(),
        _op_pairs(),
        _cfg(alpha=0.0),
        tmp_path / "augmented",
    )
    classical, _ = train_classical(
        MicroNet.initialize(ARCH, seed=0),
        _training_set(),
        _cfg(mode="classical", alpha=0.0),
        tmp_path / "classical",
    )

    assert _arrays(augmented) == _arrays(classical)
    for name in ("checkpoints/epoch_2.json", "metrics.csv"):
        assert (tmp_path / "augmented" / name).read_bytes() == (
            tmp_path / "classical" / name
        ).read_bytes()


def test_augmented_training_changes_the_weights_differently() -> None:
    classical, _ = train_classical(
        MicroNet.initialize(ARCH, seed=0), _training_set(), _cfg(mode="classical")
    )
    augmented, _ = train_augmented(
        MicroNet.initialize(ARCH, seed=0), _training_set(), _op_pairs(), _cfg(alpha=1.0)
    )

    assert _arrays(augmented) != _arrays(classical)


def test_training_is_deterministic_per_seed(tmp_path: Path) -> None:
    runs = []
    for name in ("first", "second"):
        model, record = train_augmented(
            MicroNet.initialize(ARCH, seed=0),
            _training_set(),
            _op_pairs(),
            _cfg(),
            tmp_path / name,
        )
        runs.append((_arrays(model), record))

    assert runs[0][0] == runs[1][0]
    assert runs[0][1].losses == runs[1][1].losses
    assert runs[0][1].pool_digests == runs[1][1].pool_digests
    assert (tmp_path / "first" / "metrics.csv").read_bytes() == (
        tmp_path / "second" / "metrics.csv"
    ).read_bytes()


def test_pool_is_refreshed_at_every_epoch() -> None:
    _, record = train_augmented(
        MicroNet.initialize(ARCH, seed=0), _training_set(), _op_pairs(), _cfg(epochs=3)
    )

    assert record.extractor_epochs == (0, 1, 2)
    assert len(set(record.pool_digests)) == 3
    assert len(record.losses) == len(record.accuracies) == 3


def test_frozen_parameters_stay_fixed_and_trainable_flags_are_restored() -> None:
    model = MicroNet.initialize(ARCH, seed=0)
    before = _arrays(model)

    train_augmented(model, _training_set(), _op_pairs(), _cfg(finetune_depth="head"))

    after = _arrays(model)
    for name in before:
        if name.startswith("head."):
            assert after[name] != before[name]
        else:
            assert after[name] == before[name]
    assert all(tensor.requires_grad for _, tensor in model.params.items())


def test_run_directory_layout(tmp_path: Path) -> None:
    _, record = train_model(
        MicroNet.initialize(ARCH, seed=0), _training_set(), _op_pairs(), _cfg(), tmp_path
    )

    assert record.checkpoint_path == str(tmp_path / "checkpoints" / "epoch_2.json")
    assert (tmp_path / "checkpoints" / "epoch_1.json").exists()
    lines = (tmp_path / "metrics.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "epoch,loss,acc"
    assert len(lines) == 3


def test_checkpoint_save_load_save_is_byte_identical(tmp_path: Path) -> None:
    model, _ = train_classical(
        MicroNet.initialize(ARCH, seed=0), _training_set(), _cfg(mode="classical", epochs=1)
    )
    first = save_checkpoint(tmp_path / "first.json", model, {"epoch": 1})

    loaded, meta = load_checkpoint(first, expected=ARCH)
    second = save_checkpoint(tmp_path / "second.json", loaded, {"epoch": meta["epoch"]})

    assert first.read_bytes() == second.read_bytes()
    batch = to_batch(list(_training_set().images[:4]))
    assert loaded.logits(batch).data.tobytes() == model.logits(batch).data.tobytes()


def test_loading_a_checkpoint_with_another_dfv_dim_fails(tmp_path: Path) -> None:
    path = save_checkpoint(tmp_path / "model.json", MicroNet.initialize(ARCH, seed=0))

    with pytest.raises(DataError, match="dfv_dim"):
        load_checkpoint(path, expected=replace(ARCH, channels=(4, 8, 7)))
    with pytest.raises(DataError, match="differs"):
        load_checkpoint(path, expected=replace(ARCH, num_classes=4))


def test_training_rejects_bad_inputs() -> None:
    model = MicroNet.initialize(ARCH, seed=0)
    empty = LabelledSet(ids=(), images=(), labels=np.zeros(0, dtype=np.int64))
    data = _training_set()
    wrong_labels = replace(data, labels=data.labels + 5)

    with pytest.raises(DataError, match="empty"):
        train_classical(model, empty, _cfg(mode="classical"))
    with pytest.raises(DataError, match="labels"):
        train_classical(model, wrong_labels, _cfg(mode="classical"))
    with pytest.raises(DataError, match="pair set"):
        train_augmented(model, data, [], _cfg())
    with pytest.raises(ConfigError):
        train_augmented(model, data, _op_pairs(), _cfg(mode="classical"))
    with pytest.raises(ConfigError) as excinfo:
        train_classical(model, data, _cfg(mode="classical", epochs=0))
    assert excinfo.value.field == "train.epochs"


def test_learning_rate_schedule() -> None:
    cfg = _cfg(lr=0.1, lr_step=2, lr_gamma=0.5)

    assert [learning_rate(cfg, epoch) for epoch in range(5)] == [0.1, 0.1, 0.05, 0.05, 0.025]
    assert learning_rate(_cfg(lr=0.1), 7) == 0.1


def test_dataset_loss_of_uniform_logits() -> None:
    model = MicroNet.initialize(ARCH, seed=0)
    for name, tensor in model.params.items():
        if name.startswith("head."):
            tensor.data[...] = 0.0

    assert dataset_loss(model, _training_set()) == pytest.approx(np.log(3), rel=1e-5)


def test_augment_image_keeps_shape_and_is_seeded() -> None:
    image = _training_set().images[0]

    first = augment_image(image, np.random.default_rng(0), hflip=True, affine=True)
    second = augment_image(image, np.random.default_rng(0), hflip=True, affine=True)

    assert first.shape == image.shape and first.dtype == np.uint8
    assert first.tobytes() == second.tobytes()


def test_augment_image_without_steps_is_identity_and_draws_nothing() -> None:
    image = _training_set().images[1]
    rng = np.random.default_rng(5)

    out = augment_image(image, rng, hflip=False, affine=False)

    assert out.tobytes() == image.tobytes()
    assert rng.random() == np.random.default_rng(5).random()
