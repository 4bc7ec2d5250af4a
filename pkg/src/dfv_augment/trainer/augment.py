"""Image-space augmentation for the DFV data flow."""

from __future__ import annotations

import math

import numpy as np
from PIL import Image

MAX_ROTATION_DEG = 10.0
MAX_TRANSLATION_PX = 4.0
SCALE_RANGE = (0.9, 1.1)


def augment_image(
    pixels: np.ndarray, rng: np.random.Generator, hflip: bool, affine: bool
) -> np.ndarray:
    """Random horizontal flip then a random affine warp; draws happen only for enabled steps."""
    out = pixels
    if hflip and rng.random() < 0.5:
        out = out[:, ::-1]
    if affine:
        angle = math.radians(rng.uniform(-MAX_ROTATION_DEG, MAX_ROTATION_DEG))
        shift_x, shift_y = rng.uniform(-MAX_TRANSLATION_PX, MAX_TRANSLATION_PX, size=2)
        scale = rng.uniform(*SCALE_RANGE)
        out = _warp(out, angle, float(shift_x), float(shift_y), scale)
    return np.ascontiguousarray(out)


def _warp(
    pixels: np.ndarray, angle: float, shift_x: float, shift_y: float, scale: float
) -> np.ndarray:
    height, width = pixels.shape[:2]
    centre_x, centre_y = (width - 1) / 2.0, (height - 1) / 2.0
    # PIL maps output -> input, so the coefficients are the inverse transform.
    cos_a, sin_a = math.cos(angle) / scale, math.sin(angle) / scale
    a, b, d, e = cos_a, sin_a, -sin_a, cos_a
    origin_x, origin_y = centre_x + shift_x, centre_y + shift_y
    c = centre_x - a * origin_x - b * origin_y
    f = centre_y - d * origin_x - e * origin_y
    fill = tuple(int(v) for v in pixels.reshape(-1, pixels.shape[2]).mean(axis=0))
    warped = Image.fromarray(np.ascontiguousarray(pixels)).transform(
        (width, height),
        Image.Transform.AFFINE,
        (a, b, c, d, e, f),
        resample=Image.Resampling.BILINEAR,
        fillcolor=fill,
    )
    return np.asarray(warped, dtype=np.uint8)
