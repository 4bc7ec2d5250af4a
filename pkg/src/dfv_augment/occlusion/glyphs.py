"""Built-in procedural glyph dataset.

Each class is a geometric shape. Position, size, rotation and colours are
randomised per image, so the class is carried by shape alone. Every image is
drawn from its own derived seed, which keeps an item identical no matter how
many other items are generated alongside it.
"""

from __future__ import annotations

import math

import numpy as np
from PIL import Image, ImageDraw

from dfv_augment.common import DataError, ImageItem, derive_rng

GLYPH_CLASSES: tuple[str, ...] = (
    "circle",
    "ring",
    "triangle",
    "square",
    "diamond",
    "pentagon",
    "hexagon",
    "star",
    "cross",
    "xmark",
    "hbars",
    "vbars",
    "lshape",
    "tshape",
    "crescent",
)

Polygon = list[tuple[float, float]]


def _regular(sides: int, phase: float = -math.pi / 2) -> list[Polygon]:
    step = 2 * math.pi / sides
    return [[(math.cos(phase + i * step), math.sin(phase + i * step)) for i in range(sides)]]


def _star(points: int = 5, inner: float = 0.45) -> list[Polygon]:
    vertices: Polygon = []
    for i in range(points * 2):
        radius = 1.0 if i % 2 == 0 else inner
        angle = -math.pi / 2 + i * math.pi / points
        vertices.append((radius * math.cos(angle), radius * math.sin(angle)))
    return [vertices]


def _box(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


# Unit-square outlines in [-1, 1]^2; rotated, scaled and translated per image.
_POLYGONS: dict[str, list[Polygon]] = {
    "triangle": _regular(3),
    "square": _regular(4, phase=math.pi / 4),
    "diamond": [[(0.0, -1.0), (0.65, 0.0), (0.0, 1.0), (-0.65, 0.0)]],
    "pentagon": _regular(5),
    "hexagon": _regular(6),
    "star": _star(),
    "cross": [_box(-0.25, -1.0, 0.25, 1.0), _box(-1.0, -0.25, 1.0, 0.25)],
    "xmark": [
        [(-0.9, -0.6), (-0.6, -0.9), (0.9, 0.6), (0.6, 0.9)],
        [(0.6, -0.9), (0.9, -0.6), (-0.6, 0.9), (-0.9, 0.6)],
    ],
    "hbars": [_box(-1.0, -0.8, 1.0, -0.3), _box(-1.0, 0.3, 1.0, 0.8)],
    "vbars": [_box(-0.8, -1.0, -0.3, 1.0), _box(0.3, -1.0, 0.8, 1.0)],
    "lshape": [[(-0.8, -1.0), (-0.3, -1.0), (-0.3, 0.5), (0.8, 0.5), (0.8, 1.0), (-0.8, 1.0)]],
    "tshape": [[(-1.0, -1.0), (1.0, -1.0), (1.0, -0.5), (0.25, -0.5), (0.25, 1.0),
                (-0.25, 1.0), (-0.25, -0.5), (-1.0, -0.5)]],
}


def _shape_mask(name: str, size: int, rng: np.random.Generator) -> np.ndarray:
    centre_x = size / 2 + rng.uniform(-0.1, 0.1) * size
    centre_y = size / 2 + rng.uniform(-0.1, 0.1) * size
    radius = rng.uniform(0.26, 0.36) * size
    rotation = math.radians(rng.uniform(-20.0, 20.0))

    canvas = Image.new("L", (size, size), 0)
    draw = ImageDraw.Draw(canvas)
    if name in _POLYGONS:
        cos_r, sin_r = math.cos(rotation), math.sin(rotation)
        for outline in _POLYGONS[name]:
            draw.polygon(
                [
                    (centre_x + radius * (x * cos_r - y * sin_r),
                     centre_y + radius * (x * sin_r + y * cos_r))
                    for x, y in outline
                ],
                fill=255,
            )
    else:
        box = (centre_x - radius, centre_y - radius, centre_x + radius, centre_y + radius)
        draw.ellipse(box, fill=255)
        if name == "ring":
            inner = radius * 0.55
            draw.ellipse(
                (centre_x - inner, centre_y - inner, centre_x + inner, centre_y + inner), fill=0
            )
        elif name == "crescent":
            shift = radius * 0.55
            dx, dy = shift * math.cos(rotation), shift * math.sin(rotation)
            draw.ellipse(
                (box[0] + dx, box[1] + dy, box[2] + dx, box[3] + dy),
                fill=0,
            )
        elif name != "circle":
            raise DataError(f"unknown glyph class: {name}")
    return np.asarray(canvas) > 127


def render_glyph(class_index: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """One (size, size, 3) uint8 glyph image."""
    if not 0 <= class_index < len(GLYPH_CLASSES):
        raise DataError(f"glyph class index out of range: {class_index}")
    mask = _shape_mask(GLYPH_CLASSES[class_index], size, rng)

    background = rng.integers(0, 110, size=3)
    foreground = rng.integers(140, 256, size=3)
    noise = rng.normal(0.0, 12.0, size=(size, size, 3))
    image = np.where(mask[..., None], foreground, background) + noise
    return np.clip(np.rint(image), 0, 255).astype(np.uint8)


def builtin_glyph_dataset(
    num_classes: int, images_per_class: int, image_size: int, seed: int
) -> list[ImageItem]:
    if not 1 <= num_classes <= len(GLYPH_CLASSES):
        raise DataError(
            f"builtin glyph dataset has {len(GLYPH_CLASSES)} classes, {num_classes} requested"
        )
    if images_per_class < 1:
        raise DataError("images_per_class must be positive")
    if image_size < 8:
        raise DataError(f"glyph images must be at least 8x8, got {image_size}")

    items: list[ImageItem] = []
    for class_id in range(num_classes):
        for index in range(images_per_class):
            rng = derive_rng(seed, f"glyphs:{class_id}:{index}")
            items.append(
                ImageItem(
                    item_id=f"glyph-{class_id:02d}-{index:04d}",
                    class_id=class_id,
                    pixels=render_glyph(class_id, image_size, rng),
                )
            )
    return items
