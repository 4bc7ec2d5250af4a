"""Dataset manifest read/write utilities."""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from PIL import Image

from dfv_augment.common import DataError, ImageItem

MANIFEST_COLUMNS = ("path", "class_id")


def load_image(path: Path, image_size: int) -> np.ndarray:
    """Opens an image as RGB and resizes it directly to image_size x image_size."""
    if not path.exists():
        raise DataError(f"image file not found: {path}")
    try:
        with Image.open(path) as image:
            rgb = image.convert("RGB")
            if rgb.size != (image_size, image_size):
                rgb = rgb.resize((image_size, image_size), Image.Resampling.BILINEAR)
            return np.asarray(rgb, dtype=np.uint8).copy()
    except OSError as exc:
        raise DataError(f"cannot decode image {path}: {exc}") from exc


def save_image(path: Path, pixels: np.ndarray) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels, mode="RGB").save(path)
    return path


def load_manifest(path: Path, image_size: int) -> list[ImageItem]:
    """Reads a ``path,class_id`` CSV; relative paths resolve against the manifest's folder."""
    if not path.exists():
        raise DataError(f"manifest file not found: {path}")

    with path.open("r", encoding="utf-8", newline="") as file_obj:
        reader = csv.DictReader(file_obj)
        if reader.fieldnames is None or any(
            column not in reader.fieldnames for column in MANIFEST_COLUMNS
        ):
            raise DataError(f"manifest {path} must have columns: {','.join(MANIFEST_COLUMNS)}")
        rows = list(reader)

    items: list[ImageItem] = []
    for line, row in enumerate(rows, start=2):
        try:
            class_id = int(row["class_id"])
        except ValueError as exc:
            raise DataError(f"manifest {path} line {line}: class_id is not an integer") from exc
        if class_id < 0:
            raise DataError(f"manifest {path} line {line}: class_id must be non-negative")
        image_path = Path(row["path"])
        if not image_path.is_absolute():
            image_path = path.parent / image_path
        items.append(
            ImageItem(
                item_id=image_path.stem,
                class_id=class_id,
                pixels=load_image(image_path, image_size),
            )
        )

    seen: set[str] = set()
    for item in items:
        if item.item_id in seen:
            raise DataError(f"manifest {path} lists image id {item.item_id} twice")
        seen.add(item.item_id)
    if not items:
        raise DataError(f"manifest {path} lists no images")
    return items


def write_manifest(output_dir: Path, items: Sequence[ImageItem]) -> Path:
    """Writes every item as ``images/<item_id>.png`` plus ``manifest.csv``."""
    image_dir = output_dir / "images"
    image_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = output_dir / "manifest.csv"
    with manifest_path.open("w", encoding="utf-8", newline="") as file_obj:
        writer = csv.DictWriter(file_obj, fieldnames=list(MANIFEST_COLUMNS))
        writer.writeheader()
        for item in items:
            save_image(image_dir / f"{item.item_id}.png", item.pixels)
            writer.writerow({"path": f"images/{item.item_id}.png", "class_id": item.class_id})
    return manifest_path
