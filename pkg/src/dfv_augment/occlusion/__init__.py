"""Occlusion synthesis: occluders, patterns, occluded pairs and dataset splits."""

from .compose import (
    PatternRenderer,
    build_pairs,
    compose_occlusion,
    make_patterns,
    pairs_for_refs,
    pattern_id_for,
    placement_origin,
)
from .dataset import load_image, load_manifest, save_image, write_manifest
from .glyphs import GLYPH_CLASSES, builtin_glyph_dataset, render_glyph
from .occluders import (
    PROCEDURAL_KINDS,
    achieved_ratio,
    load_occluder,
    procedural_occluders,
    save_occluder,
    scale_occluder,
    tight_crop,
)
from .splits import (
    SPLIT_MODES,
    SplitParams,
    build_split,
    load_split,
    save_split,
    split_from_dict,
    split_to_dict,
    validate_split,
)

__all__ = [
    "GLYPH_CLASSES",
    "PROCEDURAL_KINDS",
    "SPLIT_MODES",
    "PatternRenderer",
    "SplitParams",
    "achieved_ratio",
    "build_pairs",
    "build_split",
    "builtin_glyph_dataset",
    "compose_occlusion",
    "load_image",
    "load_manifest",
    "load_occluder",
    "load_split",
    "make_patterns",
    "pairs_for_refs",
    "pattern_id_for",
    "placement_origin",
    "procedural_occluders",
    "render_glyph",
    "save_image",
    "save_occluder",
    "save_split",
    "scale_occluder",
    "split_from_dict",
    "split_to_dict",
    "tight_crop",
    "validate_split",
]
