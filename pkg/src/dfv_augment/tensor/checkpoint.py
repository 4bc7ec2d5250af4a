"""Versioned JSON container for parameter sets.

Layout::

    {"format": "dfv-params", "version": 1, "meta": {...},
     "params": [{"name": ..., "shape": [...], "dtype": "<f4", "data": "<base64>"}]}

Values are stored as little-endian bytes so a round trip is bit-exact.
"""

from __future__ import annotations

import base64
import json
from pathlib import Path
from typing import Any

import numpy as np

from dfv_augment.common import DataError

from .params import ParamSet
from .tensor import Tensor

FORMAT_NAME = "dfv-params"
FORMAT_VERSION = 1


def encode_params(params: ParamSet, meta: dict[str, Any] | None = None) -> str:
    entries = []
    for name, tensor in params.items():
        little = tensor.data.astype(tensor.dtype.newbyteorder("<"), copy=False)
        entries.append(
            {
                "name": name,
                "shape": list(tensor.shape),
                "dtype": little.dtype.str,
                "data": base64.b64encode(np.ascontiguousarray(little).tobytes()).decode("ascii"),
            }
        )
    payload = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "meta": meta or {},
        "params": entries,
    }
    return json.dumps(payload, sort_keys=True, indent=1)


def decode_params(text: str) -> tuple[ParamSet, dict[str, Any]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"checkpoint is not valid JSON: {exc}") from exc
    if payload.get("format") != FORMAT_NAME:
        raise DataError(f"not a parameter checkpoint: format={payload.get('format')!r}")
    if payload.get("version") != FORMAT_VERSION:
        raise DataError(
            f"checkpoint version mismatch: file has {payload.get('version')}, "
            f"reader supports {FORMAT_VERSION}"
        )

    params = ParamSet()
    for entry in payload["params"]:
        raw = base64.b64decode(entry["data"])
        array = np.frombuffer(raw, dtype=np.dtype(entry["dtype"])).reshape(entry["shape"])
        native = array.astype(array.dtype.newbyteorder("="), copy=True)
        params.add(str(entry["name"]), Tensor(native))
    return params, dict(payload.get("meta", {}))


def save_params(path: Path, params: ParamSet, meta: dict[str, Any] | None = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(encode_params(params, meta), encoding="utf-8")
    return path


def load_params(path: Path) -> tuple[ParamSet, dict[str, Any]]:
    if not path.exists():
        raise DataError(f"checkpoint file not found: {path}")
    return decode_params(path.read_text(encoding="utf-8"))
