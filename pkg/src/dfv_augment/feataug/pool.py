"""Difference-vector pool: extraction, statistics and flat-file export."""

from __future__ import annotations

import csv
import hashlib
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from dfv_augment.common import DataError, ImagePair, ShapeError
from dfv_augment.model import MicroNet, to_batch
from dfv_augment.observability import get_logger
from dfv_augment.tensor import check_finite, no_grad

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DVPool:
    """Immutable set of DVs, one row per clean/occluded pair.

    Vectors are stored in float64: the difference of two float32 features is
    then exact, so ``clean + dv`` reproduces the occluded feature bit for bit.
    """

    pattern_ids: tuple[str, ...]
    vectors: np.ndarray
    extractor_epoch: int = 0
    _index: dict[str, np.ndarray] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vectors", np.array(self.vectors, dtype=np.float64))
        if self.vectors.ndim != 2:
            raise ShapeError(f"DV pool vectors must be [M,D], got shape {self.vectors.shape}")
        if self.vectors.shape[0] != len(self.pattern_ids):
            raise ShapeError(
                f"DV pool has {self.vectors.shape[0]} vectors "
                f"but {len(self.pattern_ids)} pattern ids"
            )
        check_finite(self.vectors, "DV pool")
        self.vectors.setflags(write=False)
        groups: dict[str, list[int]] = {}
        for row, pattern_id in enumerate(self.pattern_ids):
            groups.setdefault(pattern_id, []).append(row)
        object.__setattr__(
            self, "_index", {key: np.asarray(rows) for key, rows in groups.items()}
        )

    def __len__(self) -> int:
        return len(self.pattern_ids)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def patterns(self) -> list[str]:
        return list(self._index)

    def by_pattern(self, pattern_id: str) -> np.ndarray:
        rows = self._index.get(pattern_id)
        if rows is None:
            raise KeyError(pattern_id)
        return self.vectors[rows]

    def entry(self, row: int) -> tuple[str, np.ndarray]:
        return self.pattern_ids[row], self.vectors[row]

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.vectors).tobytes()).hexdigest()


def _features(model: MicroNet, images: Sequence[np.ndarray], batch_size: int) -> np.ndarray:
    chunks = []
    with no_grad():
        for start in range(0, len(images), batch_size):
            batch = to_batch(images[start : start + batch_size], dtype=model.dtype)
            chunks.append(model.features(batch).data)
    return np.concatenate(chunks, axis=0)


def extract_dv_pool(
    snapshot: MicroNet,
    op_pairs: Sequence[ImagePair],
    extractor_epoch: int = 0,
    batch_size: int = 64,
) -> DVPool:
    """One DV per pair: dfv(occluded) - dfv(clean), from a frozen snapshot."""
    if any(tensor.requires_grad for _, tensor in snapshot.params.items()):
        raise DataError("DV extraction needs a frozen snapshot model")
    if not op_pairs:
        raise DataError("cannot extract a DV pool from zero pairs")
    for pair in op_pairs:
        if pair.clean.pixels.shape != pair.occluded.shape:
            raise ShapeError(
                f"pair {pair.clean.item_id}@{pair.pattern_id}: clean {pair.clean.pixels.shape} "
                f"and occluded {pair.occluded.shape} differ"
            )

    clean_items = {pair.clean.item_id: pair.clean for pair in op_pairs}
    clean_ids = list(clean_items)
    clean_features = _features(
        snapshot, [clean_items[item_id].pixels for item_id in clean_ids], batch_size
    )
    clean_row = {item_id: row for row, item_id in enumerate(clean_ids)}
    occluded_features = _features(snapshot, [pair.occluded for pair in op_pairs], batch_size)
    if occluded_features.shape[1] != snapshot.dfv_dim:
        raise ShapeError(
            f"extracted DFVs have dimension {occluded_features.shape[1]}, "
            f"expected {snapshot.dfv_dim}"
        )

    base = clean_features[[clean_row[pair.clean.item_id] for pair in op_pairs]]
    vectors = occluded_features.astype(np.float64) - base.astype(np.float64)
    pool = DVPool(
        pattern_ids=tuple(pair.pattern_id for pair in op_pairs),
        vectors=vectors,
        extractor_epoch=extractor_epoch,
    )
    logger.debug(
        "dv pool extracted: epoch=%d pairs=%d patterns=%d",
        extractor_epoch,
        len(pool),
        len(pool.patterns()),
    )
    return pool


@dataclass(frozen=True)
class PoolStats:
    patterns: tuple[str, ...]
    counts: dict[str, int]
    mean_norms: dict[str, float]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def pool_stats(pool: DVPool) -> PoolStats:
    patterns = tuple(pool.patterns())
    counts: dict[str, int] = {}
    mean_norms: dict[str, float] = {}
    for pattern_id in patterns:
        vectors = pool.by_pattern(pattern_id)
        counts[pattern_id] = int(vectors.shape[0])
        mean_norms[pattern_id] = float(np.linalg.norm(vectors, axis=1).mean())
    return PoolStats(patterns=patterns, counts=counts, mean_norms=mean_norms)


def export_pool_csv(path: Path, pool: DVPool) -> Path:
    """One row per DV: pattern_id followed by D floats at full precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file_obj:
        writer = csv.writer(file_obj)
        writer.writerow(["pattern_id", *[f"d{i}" for i in range(pool.dim)]])
        for pattern_id, vector in zip(pool.pattern_ids, pool.vectors):
            writer.writerow([pattern_id, *[repr(float(value)) for value in vector]])
    return path


def load_pool_csv(path: Path, extractor_epoch: int = 0) -> DVPool:
    if not path.exists():
        raise DataError(f"DV pool file not found: {path}")
    with path.open("r", encoding="utf-8", newline="") as file_obj:
        reader = csv.reader(file_obj)
        header = next(reader, None)
        if not header or header[0] != "pattern_id":
            raise DataError(f"DV pool file {path} has no pattern_id header")
        rows = list(reader)
    if not rows:
        raise DataError(f"DV pool file {path} has no rows")
    try:
        vectors = np.asarray([[float(value) for value in row[1:]] for row in rows])
    except ValueError as exc:
        raise DataError(f"DV pool file {path} holds a non-numeric value") from exc
    return DVPool(
        pattern_ids=tuple(row[0] for row in rows),
        vectors=vectors,
        extractor_epoch=extractor_epoch,
    )
