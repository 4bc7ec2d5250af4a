"""정확도 평가와 리포트 파일 테스트."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from statistics import fmean

import numpy as np
import pytest

from dfv_augment.common import DataError, LabelledSet, OcclusionPattern, Placement
from dfv_augment.evalgeo import (
    EvalReport,
    evaluate,
    predict,
    report_from_predictions,
    report_rows,
    write_eval_report,
)
from dfv_augment.model import ArchSpec, MicroNet

ARCH = ArchSpec(image_size=16, channels=(4, 8, 6), num_classes=10)

PATTERNS = {
    "p1": OcclusionPattern("p1", "occ", 0.1, Placement.center()),
    "p2": OcclusionPattern("p2", "occ", 0.1, Placement.random(4)),
    "p3": OcclusionPattern("p3", "occ", 0.2, Placement.center()),
}


def _set(labels: list[int], prefix: str = "img", seed: int = 0) -> LabelledSet:
    rng = np.random.default_rng(seed)
    return LabelledSet(
        ids=tuple(f"{prefix}-{i}" for i in range(len(labels))),
        images=tuple(
            rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8) for _ in labels
        ),
        labels=np.asarray(labels, dtype=np.int64),
    )


def _constant_model(label: int) -> MicroNet:
    model = MicroNet.initialize(ARCH, seed=0)
    model.params["head.weight"].data[...] = 0.0
    model.params["head.bias"].data[...] = 0.0
    model.params["head.bias"].data[label] = 1.0
    return model


def _oracle_report() -> EvalReport:
    clean = _set([0, 1, 2, 3])
    occluded = {
        "p1": (_set([0, 1], "a"), np.asarray([0, 0])),
        "p2": (_set([2, 3], "b"), np.asarray([2, 3])),
        "p3": (_set([4, 5], "c"), np.asarray([0, 0])),
    }
    return report_from_predictions((clean, np.asarray([0, 1, 2, 0])), occluded, PATTERNS)


def test_report_from_hand_made_predictions() -> None:
    report = _oracle_report()

    assert report.clean_acc == 0.75
    assert report.per_pattern_acc == {"p1": 0.5, "p2": 1.0, "p3": 0.0}
    assert report.group_acc == {(0.1, "center"): 0.5, (0.1, "random"): 1.0, (0.2, "center"): 0.0}
    assert report.avg_over_occlusion == 0.5
    assert len(report.predictions) == 4 + 6


def test_constant_classifier_scores_chance_on_balanced_sets() -> None:
    model = _constant_model(label=3)
    clean = _set(list(range(10)))
    occluded = {"p1": _set(list(range(10)), "o", seed=1)}

    report = evaluate(model, clean, occluded, PATTERNS, batch_size=4)

    assert report.clean_acc == 0.1
    assert report.per_pattern_acc["p1"] == 0.1
    assert report.avg_over_occlusion == 0.1
    assert set(predict(model, clean).tolist()) == {3}


def test_prediction_does_not_depend_on_batch_size() -> None:
    model = MicroNet.initialize(ARCH, seed=2)
    data = _set([0, 1, 2, 3, 4, 5, 6])

    assert predict(model, data, batch_size=1).tolist() == predict(model, data, 128).tolist()


def test_average_is_recomputable_from_predictions_file(tmp_path: Path) -> None:
    report = _oracle_report()

    write_eval_report(tmp_path, report)

    with (tmp_path / "predictions.csv").open(encoding="utf-8", newline="") as file_obj:
        rows = [row for row in csv.DictReader(file_obj) if row["pattern_id"]]
    by_pattern: dict[str, list[bool]] = {}
    for row in rows:
        by_pattern.setdefault(row["pattern_id"], []).append(row["true"] == row["predicted"])
    recomputed = fmean(fmean(hits) for hits in by_pattern.values())
    assert recomputed == pytest.approx(report.avg_over_occlusion)


def test_eval_report_files(tmp_path: Path) -> None:
    paths = write_eval_report(tmp_path / "eval", _oracle_report())

    assert [path.name for path in paths] == ["report.csv", "report.json", "predictions.csv"]
    payload = json.loads((tmp_path / "eval" / "report.json").read_text(encoding="utf-8"))
    assert payload["clean_acc"] == 0.75
    assert payload["group_acc"] == {"r10_center": 0.5, "r10_random": 1.0, "r20_center": 0.0}
    lines = (tmp_path / "eval" / "report.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "scope,key,accuracy"
    assert lines[1] == "clean,,0.750000"
    assert lines[-1] == "avg,,0.500000"


def test_report_rows_order() -> None:
    rows = report_rows(_oracle_report())

    assert [row["scope"] for row in rows] == [
        "clean",
        "pattern",
        "pattern",
        "pattern",
        "group",
        "group",
        "group",
        "avg",
    ]


def test_empty_sets_are_rejected() -> None:
    model = MicroNet.initialize(ARCH, seed=0)
    empty = LabelledSet(ids=(), images=(), labels=np.zeros(0, dtype=np.int64))

    with pytest.raises(DataError, match="empty"):
        predict(model, empty)
    with pytest.raises(DataError, match="occluded test set is empty"):
        evaluate(model, _set([0]), {}, PATTERNS)


def test_pattern_without_definition_is_rejected() -> None:
    clean = _set([0])
    with pytest.raises(DataError, match="no definition"):
        report_from_predictions(
            (clean, np.asarray([0])), {"ghost": (_set([1]), np.asarray([1]))}, PATTERNS
        )
