"""가림 물체 생성, 스케일링, 합성 테스트."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from dfv_augment.common import DataError, ImageItem, Occluder, OcclusionPattern, Placement
from dfv_augment.occlusion import (
    PROCEDURAL_KINDS,
    PatternRenderer,
    achieved_ratio,
    build_pairs,
    compose_occlusion,
    load_occluder,
    make_patterns,
    placement_origin,
    procedural_occluders,
    save_occluder,
    scale_occluder,
)

FULL_DIMS = (224, 224)


def _square(size: int = 50, colour: int = 255, occluder_id: str = "square") -> Occluder:
    return Occluder(
        occluder_id=occluder_id,
        rgb=np.full((size, size, 3), colour, dtype=np.uint8),
        alpha=np.ones((size, size), dtype=bool),
        source="test",
    )


def _pattern(occluder_id: str, ratio: float, placement: Placement) -> OcclusionPattern:
    return OcclusionPattern(
        pattern_id=f"{occluder_id}-{ratio}-{placement.kind}",
        occluder_id=occluder_id,
        ratio=ratio,
        placement=placement,
    )


def _clean(dims: tuple[int, int], seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(*dims, 3), dtype=np.uint8)


def test_procedural_occluders_are_deterministic_per_seed() -> None:
    first = procedural_occluders(PROCEDURAL_KINDS, seed=3)
    second = procedural_occluders(PROCEDURAL_KINDS, seed=3)

    assert [occ.occluder_id for occ in first] == ["checkerboard-0", "stripes-0", "noise_blob-0"]
    for a, b in zip(first, second):
        assert a.rgb.tobytes() == b.rgb.tobytes()
        assert a.alpha.tobytes() == b.alpha.tobytes()


def test_procedural_variants_do_not_change_earlier_ones() -> None:
    one = procedural_occluders(["noise_blob"], seed=1, variants=1)
    two = procedural_occluders(["noise_blob"], seed=1, variants=2)

    assert [occ.occluder_id for occ in two] == ["noise_blob-0", "noise_blob-1"]
    assert one[0].rgb.tobytes() == two[0].rgb.tobytes()
    assert two[0].rgb.tobytes() != two[1].rgb.tobytes()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_procedural_alpha_is_binary_and_tight_cropped(seed: int) -> None:
    for occ in procedural_occluders(PROCEDURAL_KINDS, seed=seed):
        assert occ.alpha.dtype == np.bool_
        assert occ.rgb.shape[:2] == occ.alpha.shape
        assert occ.alpha[0, :].any() and occ.alpha[-1, :].any()
        assert occ.alpha[:, 0].any() and occ.alpha[:, -1].any()


def test_unknown_procedural_kind_is_rejected() -> None:
    with pytest.raises(DataError, match="unknown procedural occluder kind"):
        procedural_occluders(["spiral"], seed=0)


def test_square_occluder_at_twenty_percent_of_224() -> None:
    scaled = scale_occluder(_square(), 0.2, FULL_DIMS)

    assert scaled.size == (100, 100)
    assert achieved_ratio(scaled, FULL_DIMS) == pytest.approx(100**2 / 224**2)


def test_ratio_one_covers_the_whole_image() -> None:
    scaled = scale_occluder(_square(10), 1.0, FULL_DIMS)

    assert scaled.size == FULL_DIMS
    assert achieved_ratio(scaled, FULL_DIMS) == 1.0


@pytest.mark.parametrize("ratio", [0.05, 0.1, 0.2, 0.4])
def test_achieved_ratio_within_two_percent(ratio: float) -> None:
    for occ in procedural_occluders(PROCEDURAL_KINDS, seed=0):
        achieved = achieved_ratio(scale_occluder(occ, ratio, FULL_DIMS), FULL_DIMS)
        assert abs(achieved - ratio) <= 0.02 * ratio, occ.occluder_id


def test_non_square_aspect_is_preserved_within_one_pixel() -> None:
    stripes = procedural_occluders(["stripes"], seed=0)[0]
    height, width = stripes.size

    scaled_h, scaled_w = scale_occluder(stripes, 0.2, FULL_DIMS).size

    assert abs(scaled_w - scaled_h * width / height) <= 1.0


def test_scaling_rejects_bad_ratios() -> None:
    with pytest.raises(DataError):
        scale_occluder(_square(), 0.0, FULL_DIMS)
    with pytest.raises(DataError):
        scale_occluder(_square(), 1.5, FULL_DIMS)
    with pytest.raises(DataError, match="less than one pixel"):
        scale_occluder(_square(), 0.001, (10, 10))


def test_scaled_patch_larger_than_image_is_rejected() -> None:
    wide = Occluder(
        occluder_id="bar",
        rgb=np.zeros((4, 40, 3), dtype=np.uint8),
        alpha=np.ones((4, 40), dtype=bool),
        source="test",
    )

    with pytest.raises(DataError, match="larger than"):
        scale_occluder(wide, 0.8, (32, 32))


def test_center_placement_of_100px_patch_on_224() -> None:
    assert placement_origin(Placement.center(), (100, 100), FULL_DIMS) == (62, 62)


def test_random_placement_is_frozen_by_its_seed() -> None:
    placement = Placement.random(seed=1234)

    first = placement_origin(placement, (30, 20), (64, 64))
    second = placement_origin(placement, (30, 20), (64, 64))

    assert first == second
    assert 0 <= first[0] <= 64 - 30 and 0 <= first[1] <= 64 - 20


def test_fixed_placement_out_of_bounds_is_rejected() -> None:
    with pytest.raises(DataError, match="outside"):
        placement_origin(Placement.fixed(x=60, y=0), (10, 10), (64, 64))


def test_composite_differs_from_clean_only_inside_footprint() -> None:
    occluders = procedural_occluders(PROCEDURAL_KINDS, seed=0)
    renderer = PatternRenderer(occluders, (64, 64))
    clean = _clean((64, 64))
    patterns = make_patterns([occ.occluder_id for occ in occluders], [0.1, 0.2], 2, seed=0)

    for pattern in patterns:
        occluded = renderer.render(clean, pattern)
        footprint = renderer.footprint(pattern)
        assert np.array_equal(occluded[~footprint], clean[~footprint])
        assert footprint.sum() > 0


def test_compose_is_bit_identical_across_calls() -> None:
    occluders = procedural_occluders(["noise_blob"], seed=0)
    pattern = make_patterns(["noise_blob-0"], [0.2], 1, seed=5)[1]
    clean = _clean((64, 64), seed=9)

    first = compose_occlusion(clean, pattern, occluders)
    second = compose_occlusion(clean, pattern, occluders)

    assert first.tobytes() == second.tobytes()
    assert clean.tobytes() == _clean((64, 64), seed=9).tobytes()


def test_minimal_ratio_replaces_exactly_one_pixel() -> None:
    clean = np.zeros((10, 10, 3), dtype=np.uint8)
    pattern = _pattern("square", 0.01, Placement.center())

    occluded = compose_occlusion(clean, pattern, [_square()])

    assert int((occluded != clean).any(axis=2).sum()) == 1


def test_render_rejects_images_of_other_dims() -> None:
    renderer = PatternRenderer([_square()], (64, 64))

    with pytest.raises(DataError, match="expected 64x64"):
        renderer.render(_clean((32, 32)), _pattern("square", 0.1, Placement.center()))


def test_pattern_with_unknown_occluder_is_rejected() -> None:
    renderer = PatternRenderer([_square()], (64, 64))

    with pytest.raises(DataError, match="unknown occluder"):
        renderer.render(_clean((64, 64)), _pattern("ghost", 0.1, Placement.center()))


def test_make_patterns_grid_ids() -> None:
    patterns = make_patterns(["a", "b"], [0.1, 0.2], 1, seed=0)

    assert len(patterns) == 8
    assert [p.pattern_id for p in patterns[:2]] == ["a-r10-center", "a-r10-rand0"]
    assert patterns[1].placement.kind == "random"
    assert make_patterns(["a"], [0.1], 1, seed=0)[1] == patterns[1]


def test_build_pairs_counts_and_order() -> None:
    occluders = procedural_occluders(PROCEDURAL_KINDS, seed=0)
    renderer = PatternRenderer(occluders, (32, 32))
    items = [ImageItem(f"img-{i}", 0, _clean((32, 32), seed=i)) for i in range(5)]
    patterns = make_patterns([occ.occluder_id for occ in occluders], [0.1, 0.2], 3, seed=0)

    pairs = build_pairs(items, patterns, renderer)

    assert len(patterns) == 24
    assert len(pairs) == 5 * 24
    assert [pair.pattern_id for pair in pairs[:5]] == [patterns[0].pattern_id] * 5
    assert pairs[5].clean.item_id == "img-0"


def test_single_pair() -> None:
    renderer = PatternRenderer([_square()], (32, 32))
    item = ImageItem("only", 1, _clean((32, 32)))

    pairs = build_pairs([item], [_pattern("square", 0.1, Placement.center())], renderer)

    assert len(pairs) == 1
    assert pairs[0].clean is item


def test_occluder_png_round_trip(tmp_path: Path) -> None:
    occluder = procedural_occluders(["noise_blob"], seed=4)[0]

    loaded = load_occluder(save_occluder(tmp_path / "blob.png", occluder))

    assert loaded.occluder_id == "blob"
    assert np.array_equal(loaded.alpha, occluder.alpha)
    assert np.array_equal(loaded.rgb[loaded.alpha], occluder.rgb[occluder.alpha])


def test_load_occluder_with_empty_alpha_is_rejected(tmp_path: Path) -> None:
    from PIL import Image

    path = tmp_path / "empty.png"
    Image.new("RGBA", (8, 8), (10, 20, 30, 0)).save(path)

    with pytest.raises(DataError, match="empty"):
        load_occluder(path)
