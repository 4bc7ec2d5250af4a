"""Named parameter collections and weight initialisation."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from typing import Any

import numpy as np

from dfv_augment.common import DataError

from .tensor import Tensor


class ParamSet:
    """Ordered name -> Tensor map; order is insertion order and survives save/load."""

    def __init__(self, params: Iterable[tuple[str, Tensor]] = ()) -> None:
        self._params: dict[str, Tensor] = {}
        for name, tensor in params:
            self.add(name, tensor)

    def add(self, name: str, tensor: Tensor) -> Tensor:
        if name in self._params:
            raise DataError(f"duplicate parameter name: {name}")
        tensor.requires_grad = True
        tensor.name = name
        self._params[name] = tensor
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: object) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def items(self) -> list[tuple[str, Tensor]]:
        return list(self._params.items())

    def subset(self, names: Iterable[str]) -> ParamSet:
        """Shares the tensors (not copies) of the selected names, in this set's order."""
        wanted = set(names)
        subset = ParamSet()
        subset._params = {name: t for name, t in self._params.items() if name in wanted}
        return subset

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.grad = None

    def arrays(self) -> dict[str, np.ndarray]:
        return {name: tensor.data for name, tensor in self._params.items()}

    def load_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        if list(arrays) != self.names():
            raise DataError(f"parameter names differ: expected {self.names()}, got {list(arrays)}")
        for name, array in arrays.items():
            target = self._params[name]
            if tuple(array.shape) != target.shape:
                raise DataError(f"parameter '{name}' shape {array.shape} != {target.shape}")
            target.data = np.array(array, dtype=target.dtype, copy=True)


def kaiming_uniform(
    rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, dtype: Any = np.float32
) -> np.ndarray:
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)
