"""Tensor and tape: the graph recorder behind reverse-mode differentiation."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any

import numpy as np

from dfv_augment.common import DataError, NumericError

DEFAULT_DTYPE = np.float32
SUPPORTED_DTYPES = (np.dtype(np.float32), np.dtype(np.float64))

BackwardFn = Callable[[np.ndarray], tuple[np.ndarray | None, ...]]


class Tensor:
    """Dense n-d array with an optional gradient buffer.

    ``data`` is a numpy array in float32 (training) or float64 (gradient
    verification). ``grad`` is populated by :meth:`Tape.backward` for leaves
    that require gradients.
    """

    __slots__ = ("data", "grad", "requires_grad", "name")

    def __init__(
        self,
        data: Any,
        requires_grad: bool = False,
        name: str = "",
        dtype: Any = None,
    ) -> None:
        array = np.asarray(data, dtype=dtype)
        if array.dtype not in SUPPORTED_DTYPES:
            array = array.astype(DEFAULT_DTYPE)
        if any(extent <= 0 for extent in array.shape):
            raise DataError(f"tensor '{name}' has a non-positive extent: shape={array.shape}")
        self.data: np.ndarray = array
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(extent) for extent in self.data.shape)

    @property
    def ndim(self) -> int:
        return int(self.data.ndim)

    @property
    def dtype(self) -> np.dtype[Any]:
        return self.data.dtype

    def zero_grad(self) -> None:
        self.grad = None

    def item(self) -> float:
        return float(self.data)

    def numpy(self) -> np.ndarray:
        return self.data

    def __repr__(self) -> str:
        label = f" name={self.name}" if self.name else ""
        return f"Tensor(shape={self.shape}, dtype={self.dtype}{label})"


@dataclass(frozen=True)
class Node:
    op: str
    inputs: tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn


class Tape:
    """Records ops in execution (= topological) order and replays them backwards."""

    def __init__(self) -> None:
        self.nodes: list[Node] = []

    def __enter__(self) -> Tape:
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, *exc_info: object) -> None:
        _TAPE_STACK.pop()

    def record(
        self, op: str, inputs: tuple[Tensor, ...], output: Tensor, backward: BackwardFn
    ) -> None:
        self.nodes.append(Node(op=op, inputs=inputs, output=output, backward=backward))

    def backward(self, output: Tensor, grad: np.ndarray | None = None) -> None:
        """Accumulates d(output)/d(leaf) into every leaf's ``grad``.

        ``grad`` is the cotangent seeded at ``output``; it defaults to ones,
        which is the usual choice for a scalar loss.
        """
        seed = np.ones_like(output.data) if grad is None else np.asarray(grad, output.dtype)
        if seed.shape != output.data.shape:
            raise DataError(f"backward seed shape {seed.shape} != output shape {output.shape}")

        produced = {id(node.output) for node in self.nodes}
        pending: dict[int, np.ndarray] = {id(output): seed}

        for node in reversed(self.nodes):
            upstream = pending.pop(id(node.output), None)
            if upstream is None:
                continue
            input_grads = node.backward(upstream)
            for tensor, tensor_grad in zip(node.inputs, input_grads):
                if tensor_grad is None or not tensor.requires_grad:
                    continue
                check_finite(tensor_grad, f"{node.op} backward")
                key = id(tensor)
                if key in produced:
                    pending[key] = pending[key] + tensor_grad if key in pending else tensor_grad
                elif tensor.grad is None:
                    tensor.grad = tensor_grad.copy()
                else:
                    tensor.grad = tensor.grad + tensor_grad

        self.nodes.clear()


_TAPE_STACK: list[Tape | None] = []


def current_tape() -> Tape | None:
    return _TAPE_STACK[-1] if _TAPE_STACK else None


@contextmanager
def no_grad() -> Iterator[None]:
    """Suspends recording; ops inside run as plain numpy."""
    _TAPE_STACK.append(None)
    try:
        yield
    finally:
        _TAPE_STACK.pop()


def check_finite(array: np.ndarray, where: str) -> None:
    if not np.isfinite(array).all():
        raise NumericError(f"non-finite values produced by {where}")


def emit(
    op: str,
    inputs: tuple[Tensor, ...],
    result: np.ndarray,
    backward: BackwardFn,
) -> Tensor:
    """Wraps an op result, checks it and records it on the active tape."""
    check_finite(result, op)
    output = Tensor(result)
    output.requires_grad = any(item.requires_grad for item in inputs)
    tape = current_tape()
    if tape is not None and output.requires_grad:
        tape.record(op, inputs, output, backward)
    return output
