"""Shared data models for dfv-augment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .exceptions import DataError

PlacementKind = Literal["center", "fixed", "random"]
SplitMode = Literal["exclusive", "inclusive", "cross"]
Provenance = Literal["real", "pseudo"]


@dataclass(frozen=True, eq=False)
class ImageItem:
    """A clean labelled image at target dims (H, W, 3) uint8."""

    item_id: str
    class_id: int
    pixels: np.ndarray


@dataclass(frozen=True, eq=False)
class Occluder:
    """RGBA occluder patch: colour (h, w, 3) uint8 plus binary alpha (h, w) bool."""

    occluder_id: str
    rgb: np.ndarray
    alpha: np.ndarray
    source: str

    @property
    def size(self) -> tuple[int, int]:
        return int(self.alpha.shape[0]), int(self.alpha.shape[1])


@dataclass(frozen=True)
class Placement:
    kind: PlacementKind
    x: int = 0
    y: int = 0
    seed: int = 0

    @staticmethod
    def center() -> Placement:
        return Placement(kind="center")

    @staticmethod
    def fixed(x: int, y: int) -> Placement:
        return Placement(kind="fixed", x=x, y=y)

    @staticmethod
    def random(seed: int) -> Placement:
        return Placement(kind="random", seed=seed)


@dataclass(frozen=True)
class OcclusionPattern:
    """Same occluder texture, shape, size and location on the image."""

    pattern_id: str
    occluder_id: str
    ratio: float
    placement: Placement

    @property
    def group_key(self) -> tuple[float, PlacementKind]:
        return (self.ratio, self.placement.kind)


@dataclass(frozen=True)
class OccludedRef:
    """Reference to an occluded image: a clean item corrupted by one pattern."""

    clean_id: str
    pattern_id: str

    @property
    def ref_id(self) -> str:
        return f"{self.clean_id}@{self.pattern_id}"


@dataclass(frozen=True, eq=False)
class ImagePair:
    clean: ImageItem
    occluded: np.ndarray
    pattern_id: str


@dataclass(frozen=True, eq=False)
class FeatureVec:
    values: np.ndarray
    label: int
    provenance: Provenance = "real"
    pattern_id: str | None = None

    def __post_init__(self) -> None:
        if self.provenance == "pseudo" and not self.pattern_id:
            raise DataError("pseudo feature vectors must name the pattern of their DV")


@dataclass(frozen=True)
class DatasetSplit:
    """The five image sets of one protocol, by item id.

    ``classes`` lists the evaluation class ids; a class id's position in that
    tuple is the label index the classifier is trained on.
    """

    mode: SplitMode
    classes: tuple[int, ...]
    trn_c: tuple[str, ...]
    trn_o: tuple[OccludedRef, ...]
    op: tuple[OccludedRef, ...]
    tst_c: tuple[str, ...]
    tst_o: tuple[OccludedRef, ...]
    patterns: tuple[OcclusionPattern, ...] = field(default_factory=tuple)

    @property
    def op_c(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(ref.clean_id for ref in self.op))

    def pattern(self, pattern_id: str) -> OcclusionPattern:
        for item in self.patterns:
            if item.pattern_id == pattern_id:
                return item
        raise KeyError(pattern_id)

    def label_of(self, class_id: int) -> int:
        if class_id not in self.classes:
            raise DataError(f"class {class_id} is not an evaluation class of this split")
        return self.classes.index(class_id)


@dataclass(frozen=True, eq=False)
class LabelledSet:
    """Images paired with label indices, in a fixed order."""

    ids: tuple[str, ...]
    images: tuple[np.ndarray, ...]
    labels: np.ndarray

    def __post_init__(self) -> None:
        if not len(self.ids) == len(self.images) == len(self.labels):
            raise DataError("LabelledSet ids, images and labels must have equal length")

    def __len__(self) -> int:
        return len(self.ids)
