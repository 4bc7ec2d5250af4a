"""Accuracy evaluation on clean and occluded test sets."""

from __future__ import annotations

from collections.abc import Mapping
from statistics import fmean

import numpy as np

from dfv_augment.common import DataError, LabelledSet, OcclusionPattern
from dfv_augment.model import MicroNet, forward_classify, to_batch
from dfv_augment.observability import get_logger
from dfv_augment.tensor import no_grad

from .models import EvalReport, GroupKey, Prediction

logger = get_logger(__name__)


def predict(model: MicroNet, data: LabelledSet, batch_size: int = 128) -> np.ndarray:
    """Argmax labels for every image of the set."""
    if len(data) == 0:
        raise DataError("cannot predict on an empty set")
    chunks = []
    with no_grad():
        for start in range(0, len(data), batch_size):
            batch = to_batch(data.images[start : start + batch_size], dtype=model.dtype)
            chunks.append(forward_classify(model, batch).data.argmax(axis=1))
    return np.concatenate(chunks)


def report_from_predictions(
    clean: tuple[LabelledSet, np.ndarray],
    occluded: Mapping[str, tuple[LabelledSet, np.ndarray]],
    patterns: Mapping[str, OcclusionPattern],
) -> EvalReport:
    """Builds the report from raw predictions, so it can be recomputed from a log."""
    clean_set, clean_pred = clean
    if len(clean_set) == 0:
        raise DataError("clean test set is empty")
    if not occluded:
        raise DataError("occluded test set is empty")

    predictions = [
        Prediction(image_id, "", int(label), int(pred))
        for image_id, label, pred in zip(clean_set.ids, clean_set.labels, clean_pred)
    ]
    clean_acc = float(np.mean(clean_pred == clean_set.labels))

    per_pattern: dict[str, float] = {}
    for pattern_id, (data, pred) in occluded.items():
        if len(data) == 0:
            raise DataError(f"occluded test set for pattern {pattern_id} is empty")
        per_pattern[pattern_id] = float(np.mean(pred == data.labels))
        predictions.extend(
            Prediction(image_id, pattern_id, int(label), int(p))
            for image_id, label, p in zip(data.ids, data.labels, pred)
        )

    groups: dict[GroupKey, list[float]] = {}
    for pattern_id, accuracy in per_pattern.items():
        pattern = patterns.get(pattern_id)
        if pattern is None:
            raise DataError(f"no definition for test pattern {pattern_id}")
        groups.setdefault(pattern.group_key, []).append(accuracy)

    return EvalReport(
        clean_acc=clean_acc,
        per_pattern_acc=per_pattern,
        group_acc={key: fmean(values) for key, values in sorted(groups.items())},
        avg_over_occlusion=fmean(per_pattern.values()),
        predictions=tuple(predictions),
    )


def evaluate(
    model: MicroNet,
    tst_c: LabelledSet,
    tst_o: Mapping[str, LabelledSet],
    patterns: Mapping[str, OcclusionPattern],
    batch_size: int = 128,
) -> EvalReport:
    logger.info("evaluate started: clean=%d patterns=%d", len(tst_c), len(tst_o))
    clean = (tst_c, predict(model, tst_c, batch_size))
    occluded = {
        pattern_id: (data, predict(model, data, batch_size)) for pattern_id, data in tst_o.items()
    }
    report = report_from_predictions(clean, occluded, patterns)
    logger.info(
        "evaluate completed: clean_acc=%.4f avg_over_occlusion=%.4f",
        report.clean_acc,
        report.avg_over_occlusion,
    )
    return report
