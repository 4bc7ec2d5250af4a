"""Resolves an experiment config into images, occluders, patterns and labelled sets."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from dfv_augment.common import (
    ConfigError,
    DataError,
    DatasetSplit,
    ImageItem,
    ImagePair,
    LabelledSet,
    OccludedRef,
    Occluder,
    OcclusionPattern,
)
from dfv_augment.config import ExperimentConfig, config_hash
from dfv_augment.model import ArchSpec
from dfv_augment.observability import get_logger
from dfv_augment.occlusion import (
    PatternRenderer,
    SplitParams,
    build_split,
    builtin_glyph_dataset,
    load_manifest,
    load_occluder,
    make_patterns,
    pairs_for_refs,
    procedural_occluders,
    validate_split,
)

from .models import ExperimentData

logger = get_logger(__name__)


def load_items(config: ExperimentConfig) -> list[ImageItem]:
    dataset = config.dataset
    if dataset.source == "manifest":
        return load_manifest(Path(dataset.manifest), dataset.image_size)
    return builtin_glyph_dataset(
        dataset.num_classes, dataset.images_per_class, dataset.image_size, config.seed
    )


def load_occluders(config: ExperimentConfig) -> list[Occluder]:
    spec = config.occluders
    occluders = procedural_occluders(spec.kinds, config.seed, spec.variants) if spec.kinds else []
    occluders.extend(load_occluder(Path(path)) for path in spec.files)
    ids = [occ.occluder_id for occ in occluders]
    duplicates = sorted({occ_id for occ_id in ids if ids.count(occ_id) > 1})
    if duplicates:
        raise DataError(f"duplicate occluder ids: {duplicates}")
    return occluders


def filter_groups(
    patterns: Sequence[OcclusionPattern], groups: Sequence[tuple[float, str]]
) -> list[OcclusionPattern]:
    """Patterns whose (ratio, placement kind) is in ``groups``; empty groups keep all."""
    if not groups:
        return list(patterns)
    wanted = {(float(ratio), kind) for ratio, kind in groups}
    return [pattern for pattern in patterns if pattern.group_key in wanted]


def build_patterns(
    config: ExperimentConfig, occluders: Sequence[Occluder]
) -> tuple[list[OcclusionPattern], list[OcclusionPattern]]:
    """Pair-set patterns and test patterns for the configured occluder partition."""
    known = [occ.occluder_id for occ in occluders]
    op_ids = _select_ids(known, config.occluders.op_ids, "occluders.op_ids")
    test_ids = _select_ids(known, config.occluders.test_ids, "occluders.test_ids")
    grid = config.patterns

    def grid_for(ids: Sequence[str]) -> list[OcclusionPattern]:
        return make_patterns(
            ids, grid.ratios, grid.random_positions, config.seed, grid.include_center
        )

    op_patterns = filter_groups(grid_for(op_ids), config.split.op_groups)
    if not op_patterns:
        raise ConfigError("split.op_groups", "selects no pattern of the grid")
    return op_patterns, grid_for(test_ids)


def _select_ids(known: Sequence[str], wanted: Sequence[str], field: str) -> list[str]:
    if not wanted:
        return list(known)
    missing = [occ_id for occ_id in wanted if occ_id not in known]
    if missing:
        raise ConfigError(field, f"unknown occluder ids {missing}")
    return list(wanted)


def split_params(
    config: ExperimentConfig,
    op_patterns: Sequence[OcclusionPattern],
    test_patterns: Sequence[OcclusionPattern],
) -> SplitParams:
    split = config.split
    return SplitParams(
        eval_classes=split.eval_classes,
        op_classes=split.op_classes,
        trn_per_class=split.trn_per_class,
        tst_per_class=split.tst_per_class,
        op_clean_per_class=split.op_clean_per_class,
        seed=config.seed,
        op_patterns=tuple(op_patterns),
        test_patterns=tuple(test_patterns),
    )


def split_source(config: ExperimentConfig) -> dict[str, Any]:
    return {
        "config_hash": config_hash(config),
        "dataset": config.dataset.source,
        "manifest": config.dataset.manifest,
        "seed": config.seed,
    }


def resolve_experiment(
    config: ExperimentConfig, split: DatasetSplit | None = None
) -> ExperimentData:
    """Builds the data world; a given split is checked against the catalog instead of rebuilt."""
    items = load_items(config)
    occluders = load_occluders(config)
    if split is None:
        op_patterns, test_patterns = build_patterns(config, occluders)
        params = split_params(config, op_patterns, test_patterns)
        split = build_split(items, config.split.mode, params)
    else:
        validate_split(split, {item.item_id: item.class_id for item in items})
        known = {occ.occluder_id for occ in occluders}
        unknown = sorted({p.occluder_id for p in split.patterns} - known)
        if unknown:
            raise DataError(f"split references occluders the config does not define: {unknown}")

    logger.info(
        "experiment resolved: images=%d occluders=%d patterns=%d mode=%s",
        len(items),
        len(occluders),
        len(split.patterns),
        split.mode,
    )
    size = config.dataset.image_size
    return ExperimentData(
        config=config,
        catalog={item.item_id: item for item in items},
        occluders=tuple(occluders),
        split=split,
        renderer=PatternRenderer(occluders, (size, size)),
    )


def arch_for(data: ExperimentData) -> ArchSpec:
    model = data.config.model
    return ArchSpec(
        in_channels=3,
        image_size=data.config.dataset.image_size,
        channels=model.channels,
        num_classes=len(data.split.classes),
        kernel=model.kernel,
    )


def clean_set(data: ExperimentData, ids: Sequence[str]) -> LabelledSet:
    items = [data.catalog[item_id] for item_id in ids]
    return LabelledSet(
        ids=tuple(ids),
        images=tuple(item.pixels for item in items),
        labels=np.asarray([data.split.label_of(item.class_id) for item in items], dtype=np.int64),
    )


def occluded_set(data: ExperimentData, refs: Sequence[OccludedRef]) -> LabelledSet:
    pairs = pairs_for_refs(refs, data.catalog, data.patterns, data.renderer)
    return LabelledSet(
        ids=tuple(ref.ref_id for ref in refs),
        images=tuple(pair.occluded for pair in pairs),
        labels=np.asarray(
            [data.split.label_of(pair.clean.class_id) for pair in pairs], dtype=np.int64
        ),
    )


def training_set(data: ExperimentData, with_occluded: bool = True) -> LabelledSet:
    """trn_c, followed by trn_o unless ``with_occluded`` is off (the C model family)."""
    clean = clean_set(data, data.split.trn_c)
    if not with_occluded or not data.split.trn_o:
        return clean
    occluded = occluded_set(data, data.split.trn_o)
    return LabelledSet(
        ids=clean.ids + occluded.ids,
        images=clean.images + occluded.images,
        labels=np.concatenate([clean.labels, occluded.labels]),
    )


def evaluation_sets(data: ExperimentData) -> tuple[LabelledSet, dict[str, LabelledSet]]:
    by_pattern: dict[str, list[OccludedRef]] = {}
    for ref in data.split.tst_o:
        by_pattern.setdefault(ref.pattern_id, []).append(ref)
    return clean_set(data, data.split.tst_c), {
        pattern_id: occluded_set(data, refs) for pattern_id, refs in by_pattern.items()
    }


def op_pairs(
    data: ExperimentData, groups: Sequence[tuple[float, str]] = ()
) -> list[ImagePair]:
    """The pair set I_op, optionally restricted to some pattern groups."""
    selected = {p.pattern_id for p in filter_groups(data.split.patterns, groups)}
    refs = [ref for ref in data.split.op if ref.pattern_id in selected]
    if not refs:
        raise DataError(f"no op pairs left for pattern groups {list(groups)}")
    return pairs_for_refs(refs, data.catalog, data.patterns, data.renderer)
