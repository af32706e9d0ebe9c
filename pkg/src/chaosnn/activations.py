"""Scalar activation functions and their derivatives.

All activations are elementwise maps ``ndarray -> ndarray``.  Derivatives at
kinks use a fixed convention: the right derivative, except that the
triangular basis takes the interior value at |x| = 1 (so its derivative is
nonzero on the closed support).  Integer codes index the compiled kernels in
:mod:`chaosnn._kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit


def _tanh_deriv(x):
    t = np.tanh(x)
    return 1.0 - t * t


def _logsig_deriv(x):
    s = expit(x)
    return s * (1.0 - s)


def _elliot(x):
    return x / (1.0 + np.abs(x))


def _elliot_deriv(x):
    d = 1.0 + np.abs(x)
    return 1.0 / (d * d)


def _radbas(x):
    return np.exp(-x * x)


def _radbas_deriv(x):
    return -2.0 * x * np.exp(-x * x)


def _softplus(x):
    return np.logaddexp(0.0, x)


def _relu(x):
    return np.maximum(x, 0.0)


def _relu_deriv(x):
    # right derivative: g'(0) = 1
    return np.where(x >= 0.0, 1.0, 0.0)


def _tribas(x):
    return np.maximum(0.0, 1.0 - np.abs(x))


def _tribas_deriv(x):
    # +1 on [-1, 0), -1 on [0, 1], 0 outside: right derivative at the
    # kinks at -1 and 0, interior value at +1
    return np.where((x >= -1.0) & (x < 0.0), 1.0, np.where((x >= 0.0) & (x <= 1.0), -1.0, 0.0))


@dataclass(frozen=True)
class Activation:
    """Named scalar activation with value/derivative and a kernel code."""

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    code: int
    sigmoidal: bool  # derivative bounded in (0, 1]


ACTIVATIONS: dict[str, Activation] = {
    a.name: a
    for a in [
        Activation("tanh", np.tanh, _tanh_deriv, 0, True),
        Activation("logsig", expit, _logsig_deriv, 1, True),
        Activation("elliotsig", _elliot, _elliot_deriv, 2, True),
        Activation("radbas", _radbas, _radbas_deriv, 3, False),
        Activation("softplus", _softplus, expit, 4, True),
        Activation("relu", _relu, _relu_deriv, 5, False),
        Activation("tribas", _tribas, _tribas_deriv, 6, False),
        Activation("linear", lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float)), 7, False),
    ]
}


def get(name: str) -> Activation:
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}; choose from {sorted(ACTIVATIONS)}") from None
