"""The desk-scale classifier and its DFV boundary.

``base`` is the feature extractor (conv blocks ending in global average
pooling); its output is the deep feature vector. ``head`` is the final linear
layer, bias included. Logits are always computed as ``head(features(x))``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from dfv_augment.common import DataError, FeatureVec, ShapeError, derive_rng
from dfv_augment.tensor import (
    ParamSet,
    Tensor,
    conv2d,
    global_avg_pool,
    kaiming_uniform,
    linear,
    maxpool2,
    no_grad,
    relu,
)

FinetuneDepth = Literal["head", "last", "all"]
FINETUNE_DEPTHS: tuple[str, ...] = ("head", "last", "all")

PIXEL_MEAN = 0.5
PIXEL_STD = 0.25


@dataclass(frozen=True)
class ArchSpec:
    """Architecture descriptor, stored alongside every checkpoint."""

    in_channels: int = 3
    image_size: int = 64
    channels: tuple[int, ...] = (16, 32, 64)
    num_classes: int = 10
    kernel: int = 3

    @property
    def dfv_dim(self) -> int:
        return self.channels[-1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "in_channels": self.in_channels,
            "image_size": self.image_size,
            "channels": list(self.channels),
            "num_classes": self.num_classes,
            "kernel": self.kernel,
            "dfv_dim": self.dfv_dim,
        }

    @staticmethod
    def from_dict(payload: dict[str, Any]) -> ArchSpec:
        try:
            arch = ArchSpec(
                in_channels=int(payload["in_channels"]),
                image_size=int(payload["image_size"]),
                channels=tuple(int(c) for c in payload["channels"]),
                num_classes=int(payload["num_classes"]),
                kernel=int(payload.get("kernel", 3)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed architecture descriptor: {exc}") from exc
        if "dfv_dim" in payload and int(payload["dfv_dim"]) != arch.dfv_dim:
            raise DataError(
                f"architecture dfv_dim {payload['dfv_dim']} does not match "
                f"last conv width {arch.dfv_dim}"
            )
        return arch


class MicroNet:
    def __init__(self, arch: ArchSpec, params: ParamSet) -> None:
        self.arch = arch
        self.params = params

    @classmethod
    def initialize(cls, arch: ArchSpec, seed: int, dtype: Any = np.float32) -> MicroNet:
        """Kaiming-uniform fan-in weights, zero biases."""
        rng = derive_rng(seed, "init")
        params = ParamSet()
        previous = arch.in_channels
        k = arch.kernel
        for index, width in enumerate(arch.channels, start=1):
            fan_in = previous * k * k
            params.add(
                f"base.conv{index}.weight",
                Tensor(kaiming_uniform(rng, (width, previous, k, k), fan_in, dtype)),
            )
            params.add(f"base.conv{index}.bias", Tensor(np.zeros(width, dtype=dtype)))
            previous = width
        params.add(
            "head.weight",
            Tensor(kaiming_uniform(rng, (arch.num_classes, arch.dfv_dim), arch.dfv_dim, dtype)),
        )
        params.add("head.bias", Tensor(np.zeros(arch.num_classes, dtype=dtype)))
        return cls(arch, params)

    @property
    def dfv_dim(self) -> int:
        return self.arch.dfv_dim

    @property
    def dtype(self) -> np.dtype[Any]:
        return self.params["head.weight"].dtype

    def features(self, x: Tensor) -> Tensor:
        """Base CNN: conv3x3 -> relu -> maxpool2 per block, global-avg-pool after the last."""
        self._check_input(x)
        blocks = len(self.arch.channels)
        padding = self.arch.kernel // 2
        out = x
        for index in range(1, blocks + 1):
            out = conv2d(
                out,
                self.params[f"base.conv{index}.weight"],
                self.params[f"base.conv{index}.bias"],
                stride=1,
                padding=padding,
            )
            out = relu(out)
            if index < blocks:
                out = maxpool2(out)
        return global_avg_pool(out)

    def head(self, dfv: Tensor) -> Tensor:
        if dfv.ndim != 2 or dfv.shape[1] != self.dfv_dim:
            raise ShapeError(f"head expects [N,{self.dfv_dim}] features, got {dfv.shape}")
        return linear(dfv, self.params["head.weight"], self.params["head.bias"])

    def logits(self, x: Tensor) -> Tensor:
        return self.head(self.features(x))

    def trainable_names(self, depth: FinetuneDepth) -> list[str]:
        names = self.params.names()
        if depth == "all":
            return names
        if depth == "head":
            return [name for name in names if name.startswith("head.")]
        if depth == "last":
            last = f"base.conv{len(self.arch.channels)}."
            return [name for name in names if name.startswith(("head.", last))]
        raise DataError(f"unknown fine-tune depth: {depth}")

    def copy(self) -> MicroNet:
        params = ParamSet((name, Tensor(t.data.copy())) for name, t in self.params.items())
        return MicroNet(self.arch, params)

    def snapshot(self) -> MicroNet:
        """Frozen copy for the DV data flow; its tensors never require gradients."""
        frozen = self.copy()
        for _, tensor in frozen.params.items():
            tensor.requires_grad = False
        return frozen

    def _check_input(self, x: Tensor) -> None:
        expected = (self.arch.in_channels, self.arch.image_size, self.arch.image_size)
        if x.ndim != 4 or x.shape[1:] != expected:
            shape = ",".join(map(str, expected))
            raise ShapeError(f"input batch must be [N,{shape}], got {x.shape}")


def to_batch(images: Sequence[np.ndarray], dtype: Any = np.float32) -> Tensor:
    """Stacks (H, W, C) uint8 images into a normalised [N, C, H, W] tensor."""
    if not images:
        raise DataError("cannot build a batch from zero images")
    stacked = np.stack(images).astype(np.float64) / 255.0
    normalised = (stacked - PIXEL_MEAN) / PIXEL_STD
    return Tensor(np.ascontiguousarray(normalised.transpose(0, 3, 1, 2)).astype(dtype))


def forward_classify(model: MicroNet, batch: Tensor) -> Tensor:
    return model.logits(batch)


def extract_dfv(
    model: MicroNet,
    batch: Tensor,
    labels: Sequence[int] | None = None,
    pattern_ids: Sequence[str | None] | None = None,
) -> list[FeatureVec]:
    """Real DFVs for a batch, computed without recording gradients."""
    with no_grad():
        features = model.features(batch).data
    count = features.shape[0]
    label_list = list(labels) if labels is not None else [-1] * count
    pattern_list = list(pattern_ids) if pattern_ids is not None else [None] * count
    if len(label_list) != count or len(pattern_list) != count:
        raise ShapeError(f"labels/pattern ids must match batch size {count}")
    return [
        FeatureVec(values=features[i].copy(), label=int(label_list[i]), pattern_id=pattern_list[i])
        for i in range(count)
    ]
