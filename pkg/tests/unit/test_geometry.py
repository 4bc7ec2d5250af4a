"""DV 기하 분석과 2차원 투영 테스트."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import linalg

from dfv_augment.common import DataError, FeatureVec
from dfv_augment.evalgeo import dv_geometry, feature_cloud, project_2d
from dfv_augment.feataug import DVPool


def _pool(groups: dict[str, list[list[float]]]) -> DVPool:
    ids = [pattern_id for pattern_id, rows in groups.items() for _ in rows]
    vectors = [row for rows in groups.values() for row in rows]
    return DVPool(pattern_ids=tuple(ids), vectors=np.asarray(vectors, dtype=np.float64))


def test_constant_dv_per_pattern_gives_zero_intra_and_full_fraction() -> None:
    pool = _pool(
        {
            "a": [[1.0, 0.0, 0.0]] * 3,
            "b": [[0.0, 1.0, 0.0]] * 3,
            "c": [[0.0, 0.0, 5.0]] * 4,
        }
    )

    report = dv_geometry(pool)

    assert report.intra == {"a": 0.0, "b": 0.0, "c": 0.0}
    assert report.inter > 0.0
    assert report.fraction_intra_below_inter == 1.0


def test_one_shared_dv_makes_intra_equal_inter() -> None:
    pool = _pool({"a": [[2.0, -1.0]] * 2, "b": [[2.0, -1.0]] * 3})

    report = dv_geometry(pool)

    assert report.intra == {"a": 0.0, "b": 0.0}
    assert report.inter == 0.0
    assert report.fraction_intra_below_inter == 0.0


def test_planar_distances() -> None:
    pool = _pool({"a": [[0.0, 0.0], [0.0, 2.0]], "b": [[10.0, 0.0], [10.0, 2.0]]})

    report = dv_geometry(pool)

    assert report.intra["a"] == pytest.approx(2.0)
    assert report.intra["b"] == pytest.approx(2.0)
    assert report.inter == pytest.approx(5.0 + math.sqrt(104.0) / 2.0)
    assert report.patterns == ("a", "b")


def test_cosine_metric() -> None:
    pool = _pool({"a": [[1.0, 0.0], [2.0, 0.0]], "b": [[0.0, 1.0], [0.0, 3.0]]})

    report = dv_geometry(pool, metric="cosine")

    assert report.metric == "cosine"
    assert report.intra["a"] == pytest.approx(0.0, abs=1e-12)
    assert report.inter == pytest.approx(1.0)


def test_geometry_errors() -> None:
    with pytest.raises(DataError, match="at least 2 patterns"):
        dv_geometry(_pool({"a": [[1.0], [2.0]]}))
    with pytest.raises(DataError, match="at least 2 DVs"):
        dv_geometry(_pool({"a": [[1.0], [2.0]], "b": [[3.0]]}))
    with pytest.raises(DataError, match="zero DVs"):
        dv_geometry(_pool({"a": [[0.0], [2.0]], "b": [[3.0], [1.0]]}), metric="cosine")
    with pytest.raises(DataError, match="unknown distance metric"):
        dv_geometry(
            _pool({"a": [[1.0], [2.0]], "b": [[3.0], [1.0]]}),
            metric="manhattan",  # type: ignore[arg-type]
        )


def test_clean_dfv_norm_is_reported() -> None:
    pool = _pool({"a": [[1.0, 0.0], [2.0, 0.0]], "b": [[0.0, 1.0], [0.0, 3.0]]})
    clean = feature_cloud(
        [
            FeatureVec(values=np.asarray([3.0, 4.0]), label=0),
            FeatureVec(values=np.asarray([0.0, 1.0]), label=1),
        ],
        kind="clean",
    )

    report = dv_geometry(pool, clean)

    assert report.clean_dfv_mean_norm == pytest.approx(3.0)
    with pytest.raises(DataError, match="dimension"):
        dv_geometry(pool, feature_cloud([FeatureVec(np.zeros(3), 0)], "clean"))


def test_feature_cloud_rejects_mixed_dimensions() -> None:
    with pytest.raises(DataError, match="mixes dimensions"):
        feature_cloud([FeatureVec(np.zeros(2), 0), FeatureVec(np.zeros(3), 0)], "clean")
    with pytest.raises(DataError, match="at least one"):
        feature_cloud([], "clean")


def test_projection_matches_reference_eigendecomposition() -> None:
    rng = np.random.default_rng(0)
    data = rng.normal(size=(40, 5)) * np.asarray([5.0, 3.0, 1.0, 0.5, 0.1])

    projection = project_2d(data)

    eigenvalues = linalg.eigh(np.cov(data, rowvar=False), eigvals_only=True)
    expected = eigenvalues[::-1][:2] / eigenvalues.sum()
    assert projection.explained_variance_ratio == pytest.approx(tuple(expected))
    assert projection.coords.shape == (40, 2)
    assert np.allclose(projection.coords.mean(axis=0), 0.0, atol=1e-10)
    for component in projection.components:
        assert component[np.argmax(np.abs(component))] > 0


def test_projection_of_duplicated_points_keeps_rows() -> None:
    data = np.asarray([[1.0, 1.0], [1.0, 1.0], [3.0, 1.0], [3.0, 1.0]])

    projection = project_2d(data)

    assert projection.coords.shape == (4, 2)
    assert projection.coords[0].tolist() == projection.coords[1].tolist()
    assert projection.explained_variance_ratio == pytest.approx((1.0, 0.0))


def test_projection_errors() -> None:
    with pytest.raises(DataError, match="at least 3"):
        project_2d(np.zeros((2, 4)))
    with pytest.raises(DataError, match="rank-0"):
        project_2d(np.ones((5, 3)))
