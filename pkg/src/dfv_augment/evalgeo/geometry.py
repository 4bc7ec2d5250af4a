"""DV geometry: intra- vs inter-pattern distances and a 2-D linear projection."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import numpy as np
from scipy.spatial import distance

from dfv_augment.common import DataError, FeatureVec
from dfv_augment.feataug import DVPool
from dfv_augment.observability import get_logger

from .models import FeatureCloud, GeometryReport, Projection

logger = get_logger(__name__)

Metric = Literal["euclidean", "cosine"]
METRICS: tuple[str, ...] = ("euclidean", "cosine")


def feature_cloud(vectors: Sequence[FeatureVec], kind: str) -> FeatureCloud:
    if not vectors:
        raise DataError("feature cloud needs at least one vector")
    dims = {vec.values.shape for vec in vectors}
    if len(dims) != 1:
        raise DataError(f"feature cloud mixes dimensions: {sorted(dims)}")
    return FeatureCloud(
        vectors=np.stack([vec.values.astype(np.float64) for vec in vectors]),
        labels=tuple(vec.label for vec in vectors),
        kinds=tuple(kind for _ in vectors),
        pattern_ids=tuple(vec.pattern_id for vec in vectors),
    )


def dv_geometry(
    pool: DVPool, clean_dfvs: FeatureCloud | None = None, metric: Metric = "euclidean"
) -> GeometryReport:
    """Mean pairwise DV distance within each pattern against the mean across patterns."""
    if metric not in METRICS:
        raise DataError(f"unknown distance metric: {metric}")
    patterns = pool.patterns()
    if len(patterns) < 2:
        raise DataError(f"geometry needs at least 2 patterns, pool has {len(patterns)}")
    groups = {pattern_id: pool.by_pattern(pattern_id) for pattern_id in patterns}
    for pattern_id, vectors in groups.items():
        if vectors.shape[0] < 2:
            raise DataError(f"geometry needs at least 2 DVs for pattern {pattern_id}")
    if metric == "cosine" and not np.all(np.linalg.norm(pool.vectors, axis=1) > 0):
        raise DataError("cosine distance is undefined for zero DVs")

    intra = {
        pattern_id: float(distance.pdist(vectors, metric=metric).mean())
        for pattern_id, vectors in groups.items()
    }

    cross_sum = 0.0
    cross_count = 0
    for i, first in enumerate(patterns):
        for second in patterns[i + 1 :]:
            block = distance.cdist(groups[first], groups[second], metric=metric)
            cross_sum += float(block.sum())
            cross_count += block.size
    inter = cross_sum / cross_count

    fraction = float(np.mean([value < inter for value in intra.values()]))
    clean_norm = None
    if clean_dfvs is not None:
        if clean_dfvs.vectors.shape[1] != pool.dim:
            raise DataError(
                f"clean DFV dimension {clean_dfvs.vectors.shape[1]} != DV dimension {pool.dim}"
            )
        clean_norm = float(np.linalg.norm(clean_dfvs.vectors, axis=1).mean())

    logger.info(
        "geometry: metric=%s patterns=%d inter=%.6f fraction=%.3f",
        metric,
        len(patterns),
        inter,
        fraction,
    )
    return GeometryReport(
        metric=metric,
        intra=intra,
        inter=inter,
        fraction_intra_below_inter=fraction,
        clean_dfv_mean_norm=clean_norm,
    )


def project_2d(vectors: np.ndarray | FeatureCloud) -> Projection:
    """PCA onto the top two covariance eigenvectors.

    Each component is oriented so its largest-magnitude entry is positive.
    """
    data = vectors.vectors if isinstance(vectors, FeatureCloud) else np.asarray(vectors)
    data = data.astype(np.float64)
    if data.ndim != 2 or data.shape[0] < 3:
        raise DataError(f"projection needs at least 3 vectors, got shape {data.shape}")

    mean = data.mean(axis=0)
    centred = data - mean
    covariance = np.atleast_2d(np.cov(centred, rowvar=False))
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order]
    total = float(eigenvalues.sum())
    if total <= 1e-12 * max(1.0, float(np.abs(data).max()) ** 2):
        raise DataError("projection of a rank-0 cloud (all points identical)")

    components = np.zeros((2, data.shape[1]))
    explained = [0.0, 0.0]
    for k in range(min(2, data.shape[1])):
        component = eigenvectors[:, k]
        if component[np.argmax(np.abs(component))] < 0:
            component = -component
        components[k] = component
        explained[k] = float(eigenvalues[k] / total)

    return Projection(
        coords=centred @ components.T,
        components=components,
        mean=mean,
        explained_variance_ratio=(explained[0], explained[1]),
    )
