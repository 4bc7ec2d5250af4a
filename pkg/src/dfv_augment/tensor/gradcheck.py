"""Central finite-difference oracle for the analytic gradients."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from .tensor import Tape, Tensor, no_grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    denominator = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return np.abs(analytic - numeric) / denominator


def numeric_gradient(
    fn: Callable[[], Tensor],
    target: Tensor,
    cotangent: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    grad = np.zeros_like(target.data)
    flat = target.data.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + h
        with no_grad():
            upper = float(np.sum(fn().data * cotangent))
        flat[index] = original - h
        with no_grad():
            lower = float(np.sum(fn().data * cotangent))
        flat[index] = original
        grad.reshape(-1)[index] = (upper - lower) / (2 * h)
    return grad


def max_gradient_error(
    fn: Callable[[], Tensor],
    inputs: Sequence[Tensor],
    seed: int = 0,
    h: float = 1e-5,
) -> float:
    """Largest elementwise relative error between analytic and numeric gradients.

    Non-scalar outputs are contracted with a fixed random cotangent. Inputs must
    be float64 tensors with ``requires_grad`` set.
    """
    for tensor in inputs:
        tensor.grad = None
    with Tape() as tape:
        output = fn()
    rng = np.random.default_rng(seed)
    cotangent = rng.standard_normal(output.data.shape).astype(output.dtype)
    tape.backward(output, cotangent)

    worst = 0.0
    for tensor in inputs:
        analytic = tensor.grad if tensor.grad is not None else np.zeros_like(tensor.data)
        numeric = numeric_gradient(fn, tensor, cotangent, h)
        worst = max(worst, float(relative_error(analytic, numeric).max()))
    return worst
