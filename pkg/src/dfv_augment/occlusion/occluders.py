"""Occluder generation, loading and area-matched scaling."""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from PIL import Image

from dfv_augment.common import DataError, Occluder, derive_rng
from dfv_augment.observability import get_logger

logger = get_logger(__name__)

PROCEDURAL_KINDS: tuple[str, ...] = ("checkerboard", "stripes", "noise_blob")
BASE_SIZE = 48


def procedural_occluders(
    kinds: Sequence[str], seed: int, variants: int = 1
) -> list[Occluder]:
    """Deterministic RGBA stand-ins for segmented real-world occluders.

    Each (kind, variant) gets its own random stream, so adding variants never
    changes the earlier ones.
    """
    occluders: list[Occluder] = []
    for kind in kinds:
        if kind not in PROCEDURAL_KINDS:
            raise DataError(f"unknown procedural occluder kind: {kind}")
        for variant in range(variants):
            rng = derive_rng(seed, f"occluders:{kind}:{variant}")
            rgb, alpha = _PAINTERS[kind](rng)
            rgb, alpha = tight_crop(rgb, alpha)
            occluders.append(
                Occluder(
                    occluder_id=f"{kind}-{variant}",
                    rgb=rgb,
                    alpha=alpha,
                    source=f"procedural:{kind}",
                )
            )
    return occluders


def _random_colour(rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 256, size=3).astype(np.uint8)


def _paint_checkerboard(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    cell = int(rng.integers(4, 9))
    first, second = _random_colour(rng), _random_colour(rng)
    rows, cols = np.indices((BASE_SIZE, BASE_SIZE))
    parity = ((rows // cell) + (cols // cell)) % 2 == 0
    rgb = np.where(parity[..., None], first, second).astype(np.uint8)
    return rgb, np.ones((BASE_SIZE, BASE_SIZE), dtype=bool)


def _paint_stripes(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    height, width = BASE_SIZE * 3 // 4, BASE_SIZE
    band = int(rng.integers(3, 7))
    first, second = _random_colour(rng), _random_colour(rng)
    rows, cols = np.indices((height, width))
    if rng.random() < 0.5:
        phase = (rows + cols) // band
    else:
        phase = rows // band
    rgb = np.where((phase % 2 == 0)[..., None], first, second).astype(np.uint8)
    return rgb, np.ones((height, width), dtype=bool)


def _paint_noise_blob(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    size = BASE_SIZE
    rows, cols = np.indices((size, size)).astype(np.float64)
    centre = (size - 1) / 2.0
    dy, dx = rows - centre, cols - centre
    theta = np.arctan2(dy, dx)
    radius = np.full_like(theta, 0.42 * size)
    for harmonic in range(2, 5):
        amplitude = rng.uniform(0.03, 0.09) * size
        radius += amplitude * np.cos(harmonic * theta + rng.uniform(0, 2 * np.pi))
    alpha = np.hypot(dy, dx) <= radius
    base = _random_colour(rng).astype(np.int16)
    noise = rng.integers(-60, 61, size=(size, size, 3))
    rgb = np.clip(base + noise, 0, 255).astype(np.uint8)
    return rgb, alpha


_PAINTERS = {
    "checkerboard": _paint_checkerboard,
    "stripes": _paint_stripes,
    "noise_blob": _paint_noise_blob,
}


def tight_crop(rgb: np.ndarray, alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if not alpha.any():
        raise DataError("occluder alpha mask is empty")
    rows = np.flatnonzero(alpha.any(axis=1))
    cols = np.flatnonzero(alpha.any(axis=0))
    top, bottom = rows[0], rows[-1] + 1
    left, right = cols[0], cols[-1] + 1
    return (
        np.ascontiguousarray(rgb[top:bottom, left:right]),
        np.ascontiguousarray(alpha[top:bottom, left:right]),
    )


def load_occluder(path: Path) -> Occluder:
    """Reads an RGBA PNG; alpha is binarised at 128 and the patch tight-cropped."""
    if not path.exists():
        raise DataError(f"occluder file not found: {path}")
    with Image.open(path) as image:
        rgba = np.asarray(image.convert("RGBA"))
    rgb, alpha = tight_crop(rgba[..., :3], rgba[..., 3] >= 128)
    return Occluder(occluder_id=path.stem, rgb=rgb, alpha=alpha, source=str(path))


def save_occluder(path: Path, occluder: Occluder) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    rgba = np.dstack([occluder.rgb, occluder.alpha.astype(np.uint8) * 255])
    Image.fromarray(rgba, mode="RGBA").save(path)
    return path


def _resize_alpha(alpha: np.ndarray, height: int, width: int) -> np.ndarray:
    image = Image.fromarray(alpha.astype(np.uint8) * 255)
    return np.asarray(image.resize((width, height), Image.Resampling.NEAREST)) > 127


def scale_occluder(occluder: Occluder, ratio: float, image_dims: tuple[int, int]) -> Occluder:
    """Rescales so the alpha area over H*W matches ``ratio``, keeping the aspect ratio.

    Colour is resampled bilinearly, alpha by nearest neighbour and re-binarised.
    Among the heights around the analytic estimate (each paired with the two
    widths within one pixel of the exact aspect) the size whose alpha area is
    closest to the target wins.
    """
    height, width = image_dims
    if not 0.0 < ratio <= 1.0:
        raise DataError(f"occlusion ratio must be in (0, 1], got {ratio}")
    target = ratio * height * width
    if target < 1.0:
        raise DataError(f"ratio {ratio} covers less than one pixel of a {height}x{width} image")

    patch_h, patch_w = occluder.size
    fill = float(occluder.alpha.mean())
    estimate_h = patch_h * math.sqrt(target / (patch_h * patch_w * fill))

    best: tuple[float, int, int, np.ndarray] | None = None
    for new_h in range(max(1, math.floor(estimate_h) - 2), math.ceil(estimate_h) + 3):
        exact_w = new_h * patch_w / patch_h
        for new_w in sorted({max(1, math.floor(exact_w)), max(1, math.ceil(exact_w))}):
            alpha = _resize_alpha(occluder.alpha, new_h, new_w)
            error = abs(float(alpha.sum()) - target)
            if best is None or error < best[0]:
                best = (error, new_h, new_w, alpha)
    assert best is not None
    _, new_h, new_w, alpha = best

    if new_h > height or new_w > width:
        raise DataError(
            f"scaled occluder {occluder.occluder_id} is {new_h}x{new_w}, "
            f"larger than the {height}x{width} image"
        )
    if not alpha.any():
        raise DataError(f"occluder {occluder.occluder_id} vanished when scaled to ratio {ratio}")

    colour = Image.fromarray(occluder.rgb).resize((new_w, new_h), Image.Resampling.BILINEAR)
    rgb, alpha = tight_crop(np.asarray(colour), alpha)
    logger.debug(
        "scaled occluder=%s ratio=%.3f size=%dx%d achieved=%.4f",
        occluder.occluder_id,
        ratio,
        new_h,
        new_w,
        alpha.sum() / (height * width),
    )
    return Occluder(
        occluder_id=occluder.occluder_id,
        rgb=rgb,
        alpha=alpha,
        source=occluder.source,
    )


def achieved_ratio(occluder: Occluder, image_dims: tuple[int, int]) -> float:
    return float(occluder.alpha.sum()) / (image_dims[0] * image_dims[1])
