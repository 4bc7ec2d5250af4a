"""Pseudo-DFV generation and the alpha-switched batch sampler."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from dfv_augment.common import ConfigError, DataError, FeatureVec, ShapeError

from .pool import DVPool

SamplingKind = Literal["uniform"]


@dataclass(frozen=True)
class AugConfig:
    alpha: float = 0.9
    beta: float = 1.0
    sampling: SamplingKind = "uniform"

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha", f"must be in [0, 1], got {self.alpha}")
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise ConfigError("beta", f"must be a finite value >= 0, got {self.beta}")
        if self.sampling != "uniform":
            raise ConfigError("sampling", f"only 'uniform' is supported, got {self.sampling}")


@dataclass(frozen=True)
class SwitchDraw:
    """Per-slot switch outcome: ``rows[i]`` is the pool row for slot i, or -1 for the zero DV."""

    rows: np.ndarray

    @property
    def pseudo(self) -> np.ndarray:
        return self.rows >= 0

    def offsets(self, pool: DVPool | None, beta: float, dim: int) -> np.ndarray:
        """beta * d for pseudo slots, exact zeros elsewhere, as a [n, dim] float64 array."""
        offsets = np.zeros((self.rows.shape[0], dim), dtype=np.float64)
        mask = self.pseudo
        if mask.any():
            assert pool is not None
            if pool.dim != dim:
                raise ShapeError(f"DV dimension {pool.dim} != feature dimension {dim}")
            offsets[mask] = beta * pool.vectors[self.rows[mask]]
        return offsets


def draw_switch(
    count: int, pool: DVPool | None, cfg: AugConfig, rng: np.random.Generator
) -> SwitchDraw:
    """Independent per-slot switch: pseudo with probability alpha, a uniform pool row each.

    The generator always advances by ``count`` uniforms, then by one integer
    draw per pseudo slot.
    """
    if cfg.alpha > 0.0 and (pool is None or len(pool) == 0):
        raise DataError("augmented sampling with alpha > 0 needs a non-empty DV pool")
    switch = rng.random(count) < cfg.alpha
    rows = np.full(count, -1, dtype=np.int64)
    chosen = int(switch.sum())
    if chosen:
        assert pool is not None
        rows[switch] = rng.integers(0, len(pool), size=chosen)
    return SwitchDraw(rows=rows)


def make_pseudo_dfv(v: FeatureVec, d: np.ndarray, beta: float, pattern_id: str) -> FeatureVec:
    """v + beta * d, labelled with the clean DFV's class and tagged with the DV's pattern."""
    if not pattern_id:
        raise DataError("a pseudo-DFV needs the pattern id of its DV")
    if v.provenance != "real":
        raise DataError("pseudo-DFVs are generated from real DFVs only")
    d = np.asarray(d)
    if d.shape != v.values.shape:
        raise ShapeError(f"DV shape {d.shape} != DFV shape {v.values.shape}")
    values = (v.values.astype(np.float64) + beta * d.astype(np.float64)).astype(v.values.dtype)
    return FeatureVec(values=values, label=v.label, provenance="pseudo", pattern_id=pattern_id)


def sample_augmented_batch(
    real_dfvs: Sequence[FeatureVec],
    pool: DVPool | None,
    cfg: AugConfig,
    rng: np.random.Generator,
) -> list[FeatureVec]:
    draw = draw_switch(len(real_dfvs), pool, cfg, rng)
    batch: list[FeatureVec] = []
    for v, row in zip(real_dfvs, draw.rows):
        if row < 0:
            batch.append(v)
            continue
        assert pool is not None
        pattern_id, d = pool.entry(int(row))
        batch.append(make_pseudo_dfv(v, d, cfg.beta, pattern_id=pattern_id))
    return batch
