"""SGD with momentum."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from dfv_augment.common import DataError

from .params import ParamSet
from .tensor import check_finite


def sgd_step(
    params: ParamSet,
    lr: float,
    momentum: float = 0.0,
    velocity: dict[str, np.ndarray] | None = None,
) -> ParamSet:
    """p <- p - lr * v with v <- momentum * v + grad; grads are zeroed afterwards.

    ``velocity`` holds the momentum buffers between calls and is updated in place.
    """
    if lr < 0:
        raise DataError(f"sgd learning rate must be >= 0, got {lr}")
    if not 0.0 <= momentum < 1.0:
        raise DataError(f"sgd momentum must be in [0, 1), got {momentum}")
    for name, tensor in params.items():
        if tensor.grad is None:
            raise DataError(f"parameter '{name}' has no gradient")

    buffers = velocity if velocity is not None else {}
    for name, tensor in params.items():
        grad = tensor.grad
        assert grad is not None
        previous = buffers.get(name)
        step = grad if previous is None or momentum == 0.0 else momentum * previous + grad
        buffers[name] = step
        tensor.data = tensor.data - np.asarray(lr, dtype=tensor.dtype) * step
        check_finite(tensor.data, f"sgd_step({name})")
        tensor.grad = None
    return params


@dataclass
class SGD:
    lr: float
    momentum: float = 0.0
    velocity: dict[str, np.ndarray] = field(default_factory=dict)

    def step(self, params: ParamSet) -> ParamSet:
        return sgd_step(params, self.lr, self.momentum, self.velocity)
