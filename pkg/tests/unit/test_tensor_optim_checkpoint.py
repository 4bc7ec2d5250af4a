"""SGD 및 파라미터 직렬화 테스트."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from dfv_augment.common import DataError
from dfv_augment.tensor import (
    SGD,
    ParamSet,
    Tensor,
    decode_params,
    encode_params,
    load_params,
    save_params,
    sgd_step,
)


def _params() -> ParamSet:
    return ParamSet(
        [
            ("w", Tensor(np.array([1.0, 2.0], dtype=np.float32))),
            ("b", Tensor(np.array([0.5], dtype=np.float32))),
        ]
    )


def test_sgd_step_without_momentum() -> None:
    params = _params()
    params["w"].grad = np.array([1.0, -1.0], dtype=np.float32)
    params["b"].grad = np.array([2.0], dtype=np.float32)

    sgd_step(params, lr=0.5)

    np.testing.assert_allclose(params["w"].data, [0.5, 2.5])
    np.testing.assert_allclose(params["b"].data, [-0.5])
    assert params["w"].grad is None


def test_sgd_momentum_accumulates_velocity() -> None:
    params = ParamSet([("w", Tensor(np.array([0.0]), dtype=np.float64))])
    optimizer = SGD(lr=1.0, momentum=0.5)

    params["w"].grad = np.array([1.0])
    optimizer.step(params)
    params["w"].grad = np.array([1.0])
    optimizer.step(params)

    np.testing.assert_allclose(params["w"].data, [-2.5])


def test_sgd_with_zero_learning_rate_leaves_weights_bit_identical() -> None:
    params = _params()
    before = {name: array.copy() for name, array in params.arrays().items()}
    params["w"].grad = np.array([3.0, -7.0], dtype=np.float32)
    params["b"].grad = np.array([1.0], dtype=np.float32)

    sgd_step(params, lr=0.0, momentum=0.9)

    for name, array in params.arrays().items():
        assert array.tobytes() == before[name].tobytes()


def test_sgd_rejects_missing_gradient() -> None:
    with pytest.raises(DataError, match="no gradient"):
        sgd_step(_params(), lr=0.1)


def test_encode_decode_encode_is_byte_identical() -> None:
    rng = np.random.default_rng(0)
    params = ParamSet(
        [
            ("conv.weight", Tensor(rng.standard_normal((2, 3, 3, 3)).astype(np.float32))),
            ("head.bias", Tensor(rng.standard_normal(4))),
        ]
    )

    text = encode_params(params, {"epoch": 3})
    decoded, meta = decode_params(text)

    assert meta == {"epoch": 3}
    assert decoded.names() == ["conv.weight", "head.bias"]
    assert decoded["head.bias"].dtype == np.float64
    assert encode_params(decoded, meta) == text


def test_save_and_load_params(tmp_path: Path) -> None:
    path = save_params(tmp_path / "ckpt" / "params.json", _params())

    loaded, _ = load_params(path)

    np.testing.assert_array_equal(loaded["w"].data, [1.0, 2.0])


def test_decode_rejects_version_mismatch() -> None:
    payload = json.loads(encode_params(_params()))
    payload["version"] = 99

    with pytest.raises(DataError, match="version mismatch"):
        decode_params(json.dumps(payload))


def test_load_params_missing_file(tmp_path: Path) -> None:
    with pytest.raises(DataError, match="not found"):
        load_params(tmp_path / "missing.json")


def test_param_set_rejects_duplicate_names() -> None:
    params = _params()

    with pytest.raises(DataError, match="duplicate"):
        params.add("w", Tensor(np.zeros(2)))
