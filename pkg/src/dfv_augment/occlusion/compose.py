"""Pattern grid, placement and opaque compositing of occluders onto clean images."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from dfv_augment.common import (
    DataError,
    ImageItem,
    ImagePair,
    OccludedRef,
    Occluder,
    OcclusionPattern,
    Placement,
    derive_seed,
)

from .occluders import scale_occluder


def pattern_id_for(occluder_id: str, ratio: float, placement: Placement, index: int = 0) -> str:
    percent = int(round(ratio * 100))
    if placement.kind == "center":
        return f"{occluder_id}-r{percent:02d}-center"
    if placement.kind == "random":
        return f"{occluder_id}-r{percent:02d}-rand{index}"
    return f"{occluder_id}-r{percent:02d}-at{placement.x}x{placement.y}"


def make_patterns(
    occluder_ids: Sequence[str],
    ratios: Sequence[float],
    random_positions: int,
    seed: int,
    include_center: bool = True,
) -> list[OcclusionPattern]:
    """Occluder × ratio × (center + seeded random positions) grid."""
    patterns: list[OcclusionPattern] = []
    for occluder_id in occluder_ids:
        for ratio in ratios:
            if not 0.0 < ratio <= 1.0:
                raise DataError(f"occlusion ratio must be in (0, 1], got {ratio}")
            if include_center:
                center = Placement.center()
                patterns.append(
                    OcclusionPattern(
                        pattern_id=pattern_id_for(occluder_id, ratio, center),
                        occluder_id=occluder_id,
                        ratio=ratio,
                        placement=center,
                    )
                )
            for index in range(random_positions):
                pattern_id = pattern_id_for(occluder_id, ratio, Placement.random(0), index)
                placement = Placement.random(derive_seed(seed, f"placement:{pattern_id}"))
                patterns.append(
                    OcclusionPattern(
                        pattern_id=pattern_id,
                        occluder_id=occluder_id,
                        ratio=ratio,
                        placement=placement,
                    )
                )
    return patterns


def placement_origin(
    placement: Placement, patch_size: tuple[int, int], image_dims: tuple[int, int]
) -> tuple[int, int]:
    """Top-left (row, col) of the patch; the patch always lies fully inside the image."""
    height, width = image_dims
    patch_h, patch_w = patch_size
    if patch_h > height or patch_w > width:
        raise DataError(f"patch {patch_h}x{patch_w} does not fit a {height}x{width} image")
    if placement.kind == "center":
        return (height - patch_h) // 2, (width - patch_w) // 2
    if placement.kind == "random":
        rng = np.random.default_rng(placement.seed)
        top = int(rng.integers(0, height - patch_h + 1))
        left = int(rng.integers(0, width - patch_w + 1))
        return top, left
    if placement.kind == "fixed":
        top, left = placement.y, placement.x
        if top < 0 or left < 0 or top + patch_h > height or left + patch_w > width:
            raise DataError(
                f"fixed placement ({placement.x},{placement.y}) puts a {patch_h}x{patch_w} "
                f"patch outside the {height}x{width} image"
            )
        return top, left
    raise DataError(f"unknown placement kind: {placement.kind}")


class PatternRenderer:
    """Composites patterns onto clean images, caching the scaled patch per pattern."""

    def __init__(self, occluders: Iterable[Occluder], image_dims: tuple[int, int]) -> None:
        self.occluders: dict[str, Occluder] = {occ.occluder_id: occ for occ in occluders}
        self.image_dims = image_dims
        self._placed: dict[str, tuple[Occluder, int, int]] = {}

    def placed_patch(self, pattern: OcclusionPattern) -> tuple[Occluder, int, int]:
        cached = self._placed.get(pattern.pattern_id)
        if cached is not None:
            return cached
        occluder = self.occluders.get(pattern.occluder_id)
        if occluder is None:
            raise DataError(
                f"pattern {pattern.pattern_id} references unknown occluder {pattern.occluder_id}"
            )
        scaled = scale_occluder(occluder, pattern.ratio, self.image_dims)
        top, left = placement_origin(pattern.placement, scaled.size, self.image_dims)
        self._placed[pattern.pattern_id] = (scaled, top, left)
        return scaled, top, left

    def footprint(self, pattern: OcclusionPattern) -> np.ndarray:
        """Boolean (H, W) mask of the pixels the pattern replaces."""
        scaled, top, left = self.placed_patch(pattern)
        mask = np.zeros(self.image_dims, dtype=bool)
        patch_h, patch_w = scaled.size
        mask[top : top + patch_h, left : left + patch_w] = scaled.alpha
        return mask

    def render(self, clean: np.ndarray, pattern: OcclusionPattern) -> np.ndarray:
        if clean.shape[:2] != self.image_dims:
            raise DataError(
                f"clean image is {clean.shape[0]}x{clean.shape[1]}, "
                f"expected {self.image_dims[0]}x{self.image_dims[1]}"
            )
        scaled, top, left = self.placed_patch(pattern)
        patch_h, patch_w = scaled.size
        occluded = clean.copy()
        region = occluded[top : top + patch_h, left : left + patch_w]
        region[scaled.alpha] = scaled.rgb[scaled.alpha]
        return occluded


def compose_occlusion(
    clean: np.ndarray, pattern: OcclusionPattern, occluders: Iterable[Occluder]
) -> np.ndarray:
    renderer = PatternRenderer(occluders, (int(clean.shape[0]), int(clean.shape[1])))
    return renderer.render(clean, pattern)


def build_pairs(
    clean_set: Sequence[ImageItem],
    patterns: Sequence[OcclusionPattern],
    renderer: PatternRenderer,
) -> list[ImagePair]:
    """Every clean image under every pattern, grouped pattern by pattern."""
    return [
        ImagePair(
            clean=item,
            occluded=renderer.render(item.pixels, pattern),
            pattern_id=pattern.pattern_id,
        )
        for pattern in patterns
        for item in clean_set
    ]


def pairs_for_refs(
    refs: Sequence[OccludedRef],
    catalog: Mapping[str, ImageItem],
    patterns: Mapping[str, OcclusionPattern],
    renderer: PatternRenderer,
) -> list[ImagePair]:
    pairs: list[ImagePair] = []
    for ref in refs:
        item = catalog.get(ref.clean_id)
        if item is None:
            raise DataError(f"occluded reference {ref.ref_id} names an unknown image")
        pattern = patterns.get(ref.pattern_id)
        if pattern is None:
            raise DataError(f"occluded reference {ref.ref_id} names an unknown pattern")
        pairs.append(
            ImagePair(
                clean=item,
                occluded=renderer.render(item.pixels, pattern),
                pattern_id=pattern.pattern_id,
            )
        )
    return pairs
