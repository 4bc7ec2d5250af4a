"""MicroNet 분류기 모듈."""

from .micronet import (
    FINETUNE_DEPTHS,
    ArchSpec,
    FinetuneDepth,
    MicroNet,
    extract_dfv,
    forward_classify,
    to_batch,
)

__all__ = [
    "FINETUNE_DEPTHS",
    "ArchSpec",
    "FinetuneDepth",
    "MicroNet",
    "extract_dfv",
    "forward_classify",
    "to_batch",
]
