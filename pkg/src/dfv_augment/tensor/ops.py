"""Differentiable ops for the desk network.

Every op validates shapes, computes its forward pass in numpy, and records a
backward closure on the active tape. Accumulation order inside an op is fixed
(row-major), so identical inputs always produce bit-identical outputs.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from dfv_augment.common import DataError, ShapeError

from .tensor import Tensor, emit


def conv2d(
    x: Tensor, weight: Tensor, bias: Tensor, stride: int = 1, padding: int = 0
) -> Tensor:
    if x.ndim != 4:
        raise ShapeError(f"conv2d input must be [N,C,H,W], got shape {x.shape}")
    if weight.ndim != 4:
        raise ShapeError(f"conv2d weight must be [F,C,k,k], got shape {weight.shape}")
    n, channels, height, width = x.shape
    filters, weight_channels, k, k_w = weight.shape
    if weight_channels != channels:
        raise ShapeError(
            f"conv2d channel dimension C mismatch: input has {channels}, "
            f"weight has {weight_channels}"
        )
    if k != k_w:
        raise ShapeError(f"conv2d kernel must be square, got k={k} x {k_w}")
    if bias.shape != (filters,):
        raise ShapeError(f"conv2d bias must be [F]=[{filters}], got shape {bias.shape}")
    if stride < 1:
        raise ShapeError(f"conv2d stride must be positive, got {stride}")
    if padding < 0:
        raise ShapeError(f"conv2d padding must be non-negative, got {padding}")
    if k > height + 2 * padding:
        raise ShapeError(f"conv2d kernel k={k} exceeds padded height H={height + 2 * padding}")
    if k > width + 2 * padding:
        raise ShapeError(f"conv2d kernel k={k} exceeds padded width W={width + 2 * padding}")

    padded = x.data
    if padding:
        padded = np.pad(x.data, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    out_h = (height + 2 * padding - k) // stride + 1
    out_w = (width + 2 * padding - k) // stride + 1

    cols = _im2col(padded, k, stride, out_h, out_w)
    w_mat = weight.data.reshape(filters, -1)
    flat = cols @ w_mat.T + bias.data
    result = np.ascontiguousarray(flat.reshape(n, out_h, out_w, filters).transpose(0, 3, 1, 2))

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        grad_flat = grad.transpose(0, 2, 3, 1).reshape(-1, filters)
        grad_w = (grad_flat.T @ cols).reshape(weight.shape)
        grad_b = grad_flat.sum(axis=0)
        grad_x = None
        if x.requires_grad:
            grad_cols = grad_flat @ w_mat
            grad_padded = _col2im(grad_cols, padded.shape, k, stride, out_h, out_w)
            if padding:
                grad_padded = grad_padded[:, :, padding:-padding, padding:-padding]
            grad_x = np.ascontiguousarray(grad_padded)
        return grad_x, grad_w, grad_b

    return emit("conv2d", (x, weight, bias), result, backward)


def _im2col(padded: np.ndarray, k: int, stride: int, out_h: int, out_w: int) -> np.ndarray:
    n, channels = padded.shape[:2]
    windows = sliding_window_view(padded, (k, k), axis=(2, 3))
    windows = windows[:, :, : stride * out_h : stride, : stride * out_w : stride]
    return windows.transpose(0, 2, 3, 1, 4, 5).reshape(n * out_h * out_w, channels * k * k)


def _col2im(
    grad_cols: np.ndarray,
    padded_shape: tuple[int, ...],
    k: int,
    stride: int,
    out_h: int,
    out_w: int,
) -> np.ndarray:
    n, channels = padded_shape[:2]
    blocks = grad_cols.reshape(n, out_h, out_w, channels, k, k)
    grad_padded = np.zeros(padded_shape, dtype=grad_cols.dtype)
    for i in range(k):
        for j in range(k):
            grad_padded[:, :, i : i + stride * out_h : stride, j : j + stride * out_w : stride] += (
                blocks[:, :, :, :, i, j].transpose(0, 3, 1, 2)
            )
    return grad_padded


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0
    result = np.where(mask, x.data, np.zeros((), dtype=x.dtype))

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        return (grad * mask,)

    return emit("relu", (x,), result, backward)


def maxpool2(x: Tensor) -> Tensor:
    """2x2 max pooling with stride 2; odd trailing rows/columns are dropped."""
    if x.ndim != 4:
        raise ShapeError(f"maxpool2 input must be [N,C,H,W], got shape {x.shape}")
    n, channels, height, width = x.shape
    if height < 2 or width < 2:
        raise ShapeError(f"maxpool2 needs H and W >= 2, got H={height} W={width}")
    out_h, out_w = height // 2, width // 2
    cropped = x.data[:, :, : 2 * out_h, : 2 * out_w]
    windows = (
        cropped.reshape(n, channels, out_h, 2, out_w, 2)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(n, channels, out_h, out_w, 4)
    )
    index = windows.argmax(axis=-1)[..., None]
    result = np.take_along_axis(windows, index, axis=-1)[..., 0]

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        routed = np.zeros(windows.shape, dtype=grad.dtype)
        np.put_along_axis(routed, index, grad[..., None], axis=-1)
        unfolded = (
            routed.reshape(n, channels, out_h, out_w, 2, 2)
            .transpose(0, 1, 2, 4, 3, 5)
            .reshape(n, channels, 2 * out_h, 2 * out_w)
        )
        grad_x = np.zeros(x.data.shape, dtype=grad.dtype)
        grad_x[:, :, : 2 * out_h, : 2 * out_w] = unfolded
        return (grad_x,)

    return emit("maxpool2", (x,), result, backward)


def global_avg_pool(x: Tensor) -> Tensor:
    if x.ndim != 4:
        raise ShapeError(f"global_avg_pool input must be [N,C,H,W], got shape {x.shape}")
    height, width = x.shape[2], x.shape[3]
    result = x.data.mean(axis=(2, 3))

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        scale = np.asarray(1.0 / (height * width), dtype=grad.dtype)
        spread = np.broadcast_to((grad * scale)[:, :, None, None], x.data.shape)
        return (np.ascontiguousarray(spread),)

    return emit("global_avg_pool", (x,), result, backward)


def linear(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    if x.ndim != 2:
        raise ShapeError(f"linear input must be [N,D], got shape {x.shape}")
    if weight.ndim != 2 or weight.shape[1] != x.shape[1]:
        raise ShapeError(
            f"linear input dimension D mismatch: input has {x.shape[1]}, weight is {weight.shape}"
        )
    if bias.shape != (weight.shape[0],):
        raise ShapeError(f"linear bias must be [{weight.shape[0]}], got shape {bias.shape}")
    result = x.data @ weight.data.T + bias.data

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        grad_x = grad @ weight.data if x.requires_grad else None
        return grad_x, grad.T @ x.data, grad.sum(axis=0)

    return emit("linear", (x, weight, bias), result, backward)


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeError(f"add shape mismatch: {a.shape} vs {b.shape}")
    result = a.data + b.data

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        return grad, grad

    return emit("add", (a, b), result, backward)


def shift(x: Tensor, offset: np.ndarray) -> Tensor:
    """Adds a constant offset. The sum is formed in float64 before casting back.

    The offset is data, not a graph input, so the gradient reaches ``x`` only.
    """
    if offset.shape != x.shape:
        raise ShapeError(f"shift offset shape {offset.shape} != input shape {x.shape}")
    result = (x.data.astype(np.float64) + offset).astype(x.dtype)

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        return (grad,)

    return emit("shift", (x,), result, backward)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


def softmax_xent(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Mean negative log-likelihood over the batch."""
    if logits.ndim != 2:
        raise ShapeError(f"softmax_xent logits must be [N,K], got shape {logits.shape}")
    n, num_classes = logits.shape
    targets = np.asarray(labels, dtype=np.int64)
    if targets.shape != (n,):
        raise ShapeError(f"softmax_xent labels must be [N]=[{n}], got shape {targets.shape}")
    if targets.size and (targets.min() < 0 or targets.max() >= num_classes):
        raise DataError(f"softmax_xent label out of range [0, {num_classes})")

    log_probs = log_softmax(logits.data)
    rows = np.arange(n)
    result = np.asarray(-log_probs[rows, targets].mean(), dtype=logits.dtype)

    def backward(grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        delta = np.exp(log_probs)
        delta[rows, targets] -= 1
        return (delta * (grad / n),)

    return emit("softmax_xent", (logits,), result, backward)
