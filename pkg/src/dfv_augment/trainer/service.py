"""Classical and DFV-augmented fine-tuning.

Both trainers run through one loop, so batch order, image augmentation and the
learning-rate schedule are shared by construction. The augmented trainer adds
two hooks: an epoch-start hook that snapshots the model and rebuilds the DV
pool, and a feature hook that shifts the selected DFVs by beta * d.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from dfv_augment.common import ConfigError, DataError, ImagePair, LabelledSet, derive_rng
from dfv_augment.config import TrainConfig, validate_train_config
from dfv_augment.feataug import AugConfig, DVPool, draw_switch, extract_dv_pool
from dfv_augment.model import MicroNet, to_batch
from dfv_augment.observability import get_logger
from dfv_augment.tensor import SGD, Tape, Tensor, no_grad, shift, softmax_xent

from .augment import augment_image
from .checkpoint import save_checkpoint

logger = get_logger(__name__)

FeatureHook = Callable[[Tensor], Tensor]
EpochHook = Callable[[int], None]


@dataclass(frozen=True)
class TrainRunRecord:
    mode: str
    losses: tuple[float, ...]
    accuracies: tuple[float, ...]
    wall_time: float
    checkpoint_path: str | None
    config_hash: str
    pool_digests: tuple[str, ...] = ()
    extractor_epochs: tuple[int, ...] = ()


def train_config_hash(cfg: TrainConfig) -> str:
    text = json.dumps(dataclasses.asdict(cfg), sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def learning_rate(cfg: TrainConfig, epoch: int) -> float:
    """Constant rate, optionally decayed by lr_gamma every lr_step epochs."""
    if cfg.lr_step <= 0:
        return cfg.lr
    return cfg.lr * cfg.lr_gamma ** (epoch // cfg.lr_step)


def train_classical(
    model: MicroNet,
    trn_set: LabelledSet,
    cfg: TrainConfig,
    run_dir: Path | None = None,
) -> tuple[MicroNet, TrainRunRecord]:
    """Plain minibatch SGD on images; no pseudo-DFVs."""
    return _run(model, trn_set, cfg, run_dir, mode="classical")


def train_augmented(
    model: MicroNet,
    trn_set: LabelledSet,
    op_pairs: Sequence[ImagePair],
    cfg: TrainConfig,
    run_dir: Path | None = None,
    pool_batch_size: int = 64,
) -> tuple[MicroNet, TrainRunRecord]:
    """Dual-flow fine-tuning with a per-epoch DV-pool refresh."""
    if cfg.mode != "augmented":
        raise ConfigError("train.mode", "train_augmented needs mode 'augmented'")
    if not op_pairs:
        raise DataError("augmented training needs a non-empty pair set")

    aug = AugConfig(alpha=cfg.alpha, beta=cfg.beta)
    switch_rng = derive_rng(cfg.seed, "switch")
    current: list[DVPool] = []
    digests: list[str] = []
    epochs: list[int] = []

    def refresh_pool(epoch: int) -> None:
        snapshot = model.snapshot()
        pool = extract_dv_pool(
            snapshot, op_pairs, extractor_epoch=epoch, batch_size=pool_batch_size
        )
        current[:] = [pool]
        digests.append(pool.digest())
        epochs.append(pool.extractor_epoch)
        logger.info("dv pool refreshed: epoch=%d size=%d", epoch, len(pool))

    def add_pseudo(features: Tensor) -> Tensor:
        pool = current[0]
        draw = draw_switch(features.shape[0], pool, aug, switch_rng)
        if not draw.pseudo.any():
            return features
        return shift(features, draw.offsets(pool, aug.beta, features.shape[1]))

    model, record = _run(
        model,
        trn_set,
        cfg,
        run_dir,
        mode="augmented",
        epoch_hook=refresh_pool,
        feature_hook=add_pseudo,
    )
    return model, dataclasses.replace(
        record, pool_digests=tuple(digests), extractor_epochs=tuple(epochs)
    )


def train_model(
    model: MicroNet,
    trn_set: LabelledSet,
    op_pairs: Sequence[ImagePair],
    cfg: TrainConfig,
    run_dir: Path | None = None,
) -> tuple[MicroNet, TrainRunRecord]:
    if cfg.mode == "augmented":
        return train_augmented(model, trn_set, op_pairs, cfg, run_dir)
    return train_classical(model, trn_set, cfg, run_dir)


def dataset_loss(model: MicroNet, data: LabelledSet, batch_size: int = 128) -> float:
    """Mean cross-entropy over a set, without augmentation or gradients."""
    if len(data) == 0:
        raise DataError("cannot compute the loss of an empty set")
    total = 0.0
    with no_grad():
        for start in range(0, len(data), batch_size):
            images = data.images[start : start + batch_size]
            labels = data.labels[start : start + batch_size]
            loss = softmax_xent(model.logits(to_batch(images, dtype=model.dtype)), labels)
            total += loss.item() * len(images)
    return total / len(data)


def _run(
    model: MicroNet,
    trn_set: LabelledSet,
    cfg: TrainConfig,
    run_dir: Path | None,
    mode: str,
    epoch_hook: EpochHook | None = None,
    feature_hook: FeatureHook | None = None,
) -> tuple[MicroNet, TrainRunRecord]:
    validate_train_config(cfg)
    if len(trn_set) == 0:
        raise DataError("training set is empty")
    labels_all = np.asarray(trn_set.labels, dtype=np.int64)
    if labels_all.min() < 0 or labels_all.max() >= model.arch.num_classes:
        raise DataError(f"training labels must lie in [0, {model.arch.num_classes})")

    order_rng = derive_rng(cfg.seed, "order")
    aug_rng = derive_rng(cfg.seed, "image-aug")
    trainable_names = model.trainable_names(cfg.finetune_depth)
    trainable = model.params.subset(trainable_names)
    kept = set(trainable_names)
    frozen = [t for name, t in model.params.items() if name not in kept]
    optimizer = SGD(lr=cfg.lr, momentum=cfg.momentum)

    if run_dir is not None:
        (run_dir / "checkpoints").mkdir(parents=True, exist_ok=True)
    metrics_rows: list[list[str]] = []
    losses: list[float] = []
    accuracies: list[float] = []
    checkpoint: Path | None = None
    count = len(trn_set)

    logger.info(
        "train started: mode=%s epochs=%d samples=%d depth=%s",
        mode,
        cfg.epochs,
        count,
        cfg.finetune_depth,
    )
    started = time.perf_counter()
    for tensor in frozen:
        tensor.requires_grad = False
    try:
        for epoch in range(cfg.epochs):
            optimizer.lr = learning_rate(cfg, epoch)
            if epoch_hook is not None:
                epoch_hook(epoch)

            order = order_rng.permutation(count)
            loss_sum = 0.0
            correct = 0
            for start in range(0, count, cfg.batch_size):
                index = order[start : start + cfg.batch_size]
                images = [
                    augment_image(trn_set.images[i], aug_rng, cfg.hflip, cfg.affine)
                    for i in index
                ]
                labels = labels_all[index]
                batch = to_batch(images, dtype=model.dtype)
                with Tape() as tape:
                    features = model.features(batch)
                    if feature_hook is not None:
                        features = feature_hook(features)
                    logits = model.head(features)
                    loss = softmax_xent(logits, labels)
                    tape.backward(loss)
                optimizer.step(trainable)
                model.params.zero_grad()
                loss_sum += loss.item() * len(index)
                correct += int((logits.data.argmax(axis=1) == labels).sum())
                logger.debug("batch: epoch=%d start=%d loss=%.6f", epoch, start, loss.item())

            epoch_loss = loss_sum / count
            epoch_acc = correct / count
            losses.append(epoch_loss)
            accuracies.append(epoch_acc)
            metrics_rows.append([str(epoch + 1), f"{epoch_loss:.6f}", f"{epoch_acc:.6f}"])
            logger.info(
                "train epoch=%d loss=%.6f acc=%.4f lr=%g",
                epoch + 1,
                epoch_loss,
                epoch_acc,
                optimizer.lr,
            )
            if run_dir is not None:
                checkpoint = save_checkpoint(
                    run_dir / "checkpoints" / f"epoch_{epoch + 1}.json",
                    model,
                    {"epoch": epoch + 1},
                )
    finally:
        for tensor in frozen:
            tensor.requires_grad = True

    wall_time = time.perf_counter() - started
    if run_dir is not None:
        _write_metrics(run_dir / "metrics.csv", metrics_rows)
    logger.info("train completed: mode=%s wall_time=%.1fs", mode, wall_time)
    return model, TrainRunRecord(
        mode=mode,
        losses=tuple(losses),
        accuracies=tuple(accuracies),
        wall_time=wall_time,
        checkpoint_path=str(checkpoint) if checkpoint is not None else None,
        config_hash=train_config_hash(cfg),
    )


def _write_metrics(path: Path, rows: list[list[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as file_obj:
        writer = csv.writer(file_obj, lineterminator="\n")
        writer.writerow(["epoch", "loss", "acc"])
        writer.writerows(rows)
