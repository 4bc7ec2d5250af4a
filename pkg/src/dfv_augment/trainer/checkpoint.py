"""Model checkpoints: parameters plus the architecture descriptor."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from dfv_augment.common import DataError
from dfv_augment.model import ArchSpec, MicroNet
from dfv_augment.tensor import load_params, save_params


def save_checkpoint(path: Path, model: MicroNet, extra: dict[str, Any] | None = None) -> Path:
    meta: dict[str, Any] = {"arch": model.arch.to_dict()}
    if extra:
        meta.update(extra)
    return save_params(path, model.params, meta)


def load_checkpoint(
    path: Path, expected: ArchSpec | None = None
) -> tuple[MicroNet, dict[str, Any]]:
    """Rebuilds the model; raises DataError on architecture or parameter mismatches."""
    params, meta = load_params(path)
    if "arch" not in meta:
        raise DataError(f"checkpoint {path} carries no architecture descriptor")
    arch = ArchSpec.from_dict(meta["arch"])
    if expected is not None and arch.dfv_dim != expected.dfv_dim:
        raise DataError(
            f"checkpoint {path} has dfv_dim {arch.dfv_dim}, expected {expected.dfv_dim}"
        )
    if expected is not None and arch != expected:
        raise DataError(f"checkpoint {path} architecture {arch} differs from {expected}")

    if "head.weight" not in params:
        raise DataError(f"checkpoint {path} has no classifier head")
    model = MicroNet.initialize(arch, seed=0, dtype=params["head.weight"].dtype)
    model.params.load_arrays(params.arrays())
    return model, meta
