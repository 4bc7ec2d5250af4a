"""Trainer module."""

from .augment import augment_image
from .checkpoint import load_checkpoint, save_checkpoint
from .service import (
    TrainRunRecord,
    dataset_loss,
    learning_rate,
    train_augmented,
    train_classical,
    train_config_hash,
    train_model,
)

__all__ = [
    "TrainRunRecord",
    "augment_image",
    "dataset_loss",
    "learning_rate",
    "load_checkpoint",
    "save_checkpoint",
    "train_augmented",
    "train_classical",
    "train_config_hash",
    "train_model",
]
