"""Protocol-compliant dataset splits and their JSON description."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from dfv_augment.common import (
    DataError,
    DatasetSplit,
    ImageItem,
    OccludedRef,
    OcclusionPattern,
    Placement,
    SplitMode,
    derive_rng,
)
from dfv_augment.observability import get_logger

logger = get_logger(__name__)

SPLIT_MODES: tuple[str, ...] = ("exclusive", "inclusive", "cross")
SPLIT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SplitParams:
    """Class and image counts for one protocol.

    ``op_patterns`` build the pair set I_op; ``test_patterns`` build I_tst_o.
    """

    eval_classes: int
    op_classes: int
    trn_per_class: int
    tst_per_class: int
    op_clean_per_class: int
    seed: int
    op_patterns: tuple[OcclusionPattern, ...]
    test_patterns: tuple[OcclusionPattern, ...]


def _check_params(params: SplitParams, mode: str) -> None:
    if mode not in SPLIT_MODES:
        raise DataError(f"unknown split mode: {mode}")
    for name in ("eval_classes", "op_classes", "trn_per_class", "tst_per_class",
                 "op_clean_per_class"):
        if getattr(params, name) < 1:
            raise DataError(f"split parameter {name} must be positive")
    if not params.op_patterns or not params.test_patterns:
        raise DataError("split needs at least one op pattern and one test pattern")
    if mode != "exclusive" and params.op_classes > params.eval_classes:
        raise DataError(
            f"{mode} split draws op classes from the {params.eval_classes} evaluation classes, "
            f"{params.op_classes} requested"
        )
    if mode != "exclusive" and params.op_clean_per_class > params.trn_per_class:
        raise DataError(
            "op_clean_per_class cannot exceed trn_per_class for a training-side pair set"
        )


def build_split(items: Sequence[ImageItem], mode: SplitMode, params: SplitParams) -> DatasetSplit:
    _check_params(params, mode)

    by_class: dict[int, list[str]] = {}
    for item in items:
        by_class.setdefault(item.class_id, []).append(item.item_id)
    class_ids = sorted(by_class)
    needed = params.eval_classes + (params.op_classes if mode == "exclusive" else 0)
    if len(class_ids) < needed:
        raise DataError(f"{mode} split needs {needed} classes, manifest has {len(class_ids)}")

    rng = derive_rng(params.seed, "split")
    order = [class_ids[i] for i in rng.permutation(len(class_ids))]
    eval_classes = tuple(sorted(order[: params.eval_classes]))
    if mode == "exclusive":
        op_classes = sorted(order[params.eval_classes : needed])
    else:
        chosen = rng.choice(len(eval_classes), size=params.op_classes, replace=False)
        op_classes = sorted(eval_classes[int(i)] for i in chosen)

    def shuffled(class_id: int) -> list[str]:
        ids = sorted(by_class[class_id])
        return [ids[i] for i in rng.permutation(len(ids))]

    trn_c: list[str] = []
    tst_c: list[str] = []
    trn_by_class: dict[int, list[str]] = {}
    for class_id in eval_classes:
        ids = shuffled(class_id)
        if len(ids) < params.trn_per_class + 1:
            raise DataError(
                f"class {class_id} has {len(ids)} images; needs {params.trn_per_class} for "
                "training plus at least one for testing"
            )
        trn_by_class[class_id] = ids[: params.trn_per_class]
        trn_c.extend(trn_by_class[class_id])
        tst_c.extend(ids[params.trn_per_class : params.trn_per_class + params.tst_per_class])

    op_clean: list[str] = []
    for class_id in op_classes:
        source = shuffled(class_id) if mode == "exclusive" else trn_by_class[class_id]
        if len(source) < params.op_clean_per_class:
            raise DataError(
                f"class {class_id} has {len(source)} images; pair set needs "
                f"{params.op_clean_per_class}"
            )
        op_clean.extend(source[: params.op_clean_per_class])

    op = tuple(
        OccludedRef(clean_id, pattern.pattern_id)
        for pattern in params.op_patterns
        for clean_id in op_clean
    )
    tst_o = tuple(
        OccludedRef(clean_id, pattern.pattern_id)
        for pattern in params.test_patterns
        for clean_id in tst_c
    )
    patterns = tuple(
        {p.pattern_id: p for p in (*params.op_patterns, *params.test_patterns)}.values()
    )
    split = DatasetSplit(
        mode=mode,
        classes=eval_classes,
        trn_c=tuple(trn_c),
        trn_o=op if mode != "exclusive" else (),
        op=op,
        tst_c=tuple(tst_c),
        tst_o=tst_o,
        patterns=patterns,
    )
    validate_split(split, {item.item_id: item.class_id for item in items})
    logger.info(
        "split built: mode=%s classes=%d trn_c=%d op=%d tst_c=%d tst_o=%d",
        mode,
        len(eval_classes),
        len(split.trn_c),
        len(split.op),
        len(split.tst_c),
        len(split.tst_o),
    )
    return split


def validate_split(split: DatasetSplit, class_of: Mapping[str, int]) -> None:
    """Raises DataError when a disjointness invariant of the split's mode is broken."""
    trn_c = set(split.trn_c)
    if trn_c & set(split.tst_c):
        raise DataError("split invariant broken: test and training clean images overlap")

    known = {pattern.pattern_id for pattern in split.patterns}
    for ref in (*split.trn_o, *split.op, *split.tst_o):
        if ref.pattern_id not in known:
            raise DataError(f"split references undeclared pattern {ref.pattern_id}")
        if ref.clean_id not in class_of:
            raise DataError(f"split references unknown image {ref.clean_id}")
    for item_id in (*split.trn_c, *split.tst_c):
        if item_id not in class_of:
            raise DataError(f"split references unknown image {item_id}")
        if class_of[item_id] not in split.classes:
            raise DataError(f"image {item_id} is not from an evaluation class")

    op_c = set(split.op_c)
    if split.mode == "exclusive":
        trn_classes = {class_of[item_id] for item_id in split.trn_c}
        op_classes = {class_of[item_id] for item_id in op_c}
        if trn_classes & op_classes:
            raise DataError("exclusive split broken: pair-set classes overlap training classes")
        if split.trn_o:
            raise DataError("exclusive split broken: occluded training images present")
        return

    if not op_c <= trn_c:
        raise DataError(f"{split.mode} split broken: pair-set clean images outside training set")
    if set(split.trn_o) != set(split.op):
        raise DataError(f"{split.mode} split broken: occluded training set differs from pair set")
    if split.mode == "cross":
        shared = {ref.pattern_id for ref in split.op} & {ref.pattern_id for ref in split.tst_o}
        if shared:
            raise DataError(
                "cross-pattern split broken: patterns shared by pair set and test set: "
                + ", ".join(sorted(shared))
            )


def _pattern_to_dict(pattern: OcclusionPattern) -> dict[str, Any]:
    placement = pattern.placement
    return {
        "pattern_id": pattern.pattern_id,
        "occluder_id": pattern.occluder_id,
        "ratio": pattern.ratio,
        "placement": {
            "kind": placement.kind,
            "x": placement.x,
            "y": placement.y,
            "seed": placement.seed,
        },
    }


def _pattern_from_dict(payload: Mapping[str, Any]) -> OcclusionPattern:
    placement = payload["placement"]
    return OcclusionPattern(
        pattern_id=str(payload["pattern_id"]),
        occluder_id=str(payload["occluder_id"]),
        ratio=float(payload["ratio"]),
        placement=Placement(
            kind=placement["kind"],
            x=int(placement.get("x", 0)),
            y=int(placement.get("y", 0)),
            seed=int(placement.get("seed", 0)),
        ),
    )


def _ref_from_id(ref_id: str) -> OccludedRef:
    clean_id, sep, pattern_id = ref_id.rpartition("@")
    if not sep:
        raise DataError(f"malformed occluded image reference: {ref_id}")
    return OccludedRef(clean_id, pattern_id)


def split_to_dict(split: DatasetSplit) -> dict[str, Any]:
    return {
        "mode": split.mode,
        "classes": list(split.classes),
        "trn_c": list(split.trn_c),
        "trn_o": [ref.ref_id for ref in split.trn_o],
        "op": [ref.ref_id for ref in split.op],
        "tst_c": list(split.tst_c),
        "tst_o": [ref.ref_id for ref in split.tst_o],
        "patterns": [_pattern_to_dict(pattern) for pattern in split.patterns],
    }


def split_from_dict(payload: Mapping[str, Any]) -> DatasetSplit:
    try:
        mode = payload["mode"]
        if mode not in SPLIT_MODES:
            raise DataError(f"unknown split mode: {mode}")
        return DatasetSplit(
            mode=mode,
            classes=tuple(int(c) for c in payload["classes"]),
            trn_c=tuple(str(i) for i in payload["trn_c"]),
            trn_o=tuple(_ref_from_id(r) for r in payload["trn_o"]),
            op=tuple(_ref_from_id(r) for r in payload["op"]),
            tst_c=tuple(str(i) for i in payload["tst_c"]),
            tst_o=tuple(_ref_from_id(r) for r in payload["tst_o"]),
            patterns=tuple(_pattern_from_dict(p) for p in payload["patterns"]),
        )
    except KeyError as exc:
        raise DataError(f"split description is missing field {exc}") from exc


def save_split(path: Path, split: DatasetSplit, source: Mapping[str, Any] | None = None) -> Path:
    """Writes split.json: item ids per set, full pattern definitions and the data source."""
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": "dfv-split",
        "version": SPLIT_FORMAT_VERSION,
        "source": dict(source or {}),
        "split": split_to_dict(split),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_split(path: Path) -> tuple[DatasetSplit, dict[str, Any]]:
    if not path.exists():
        raise DataError(f"split file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"split file {path} is not valid JSON: {exc}") from exc
    if payload.get("format") != "dfv-split" or payload.get("version") != SPLIT_FORMAT_VERSION:
        raise DataError(f"split file {path} has an unsupported format or version")
    return split_from_dict(payload["split"]), dict(payload.get("source", {}))
