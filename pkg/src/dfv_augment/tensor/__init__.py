"""Tensor engine: arrays, tape-based reverse-mode differentiation, SGD."""

from .checkpoint import decode_params, encode_params, load_params, save_params
from .gradcheck import max_gradient_error, relative_error
from .ops import (
    add,
    conv2d,
    global_avg_pool,
    linear,
    log_softmax,
    maxpool2,
    relu,
    shift,
    softmax,
    softmax_xent,
)
from .optim import SGD, sgd_step
from .params import ParamSet, kaiming_uniform
from .tensor import DEFAULT_DTYPE, Tape, Tensor, check_finite, current_tape, no_grad

__all__ = [
    "DEFAULT_DTYPE",
    "ParamSet",
    "SGD",
    "Tape",
    "Tensor",
    "add",
    "check_finite",
    "conv2d",
    "current_tape",
    "decode_params",
    "encode_params",
    "global_avg_pool",
    "kaiming_uniform",
    "linear",
    "load_params",
    "log_softmax",
    "max_gradient_error",
    "maxpool2",
    "no_grad",
    "relative_error",
    "relu",
    "save_params",
    "sgd_step",
    "shift",
    "softmax",
    "softmax_xent",
]
