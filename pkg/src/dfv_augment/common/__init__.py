"""Common helpers and models."""

from .exceptions import ConfigError, DataError, DfvError, NumericError, ShapeError
from .models import (
    DatasetSplit,
    FeatureVec,
    ImageItem,
    ImagePair,
    LabelledSet,
    OccludedRef,
    Occluder,
    OcclusionPattern,
    Placement,
    PlacementKind,
    Provenance,
    SplitMode,
)
from .seeds import derive_rng, derive_seed

__all__ = [
    "ConfigError",
    "DataError",
    "DatasetSplit",
    "DfvError",
    "FeatureVec",
    "ImageItem",
    "ImagePair",
    "LabelledSet",
    "NumericError",
    "OccludedRef",
    "Occluder",
    "OcclusionPattern",
    "Placement",
    "PlacementKind",
    "Provenance",
    "ShapeError",
    "SplitMode",
    "derive_rng",
    "derive_seed",
]
