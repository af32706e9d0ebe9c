"""Feedforward emulator nets and their neuron-space form.

A net is a plain stack of affine layers with one scalar activation on
every hidden layer and a linear output layer.  For the single-hidden
case y' = g(W1 x + b1), x' = W2 y' + b2 there is an equivalent map that
never leaves neuron space:

    y_{k+1} = g(Wstar y_k + bstar),  Wstar = W1 W2,  bstar = W1 b2 + b1

with phase space recovered by decode(y) = W2 y + b2.  All the geometric
analysis (SVD sub-steps, perturbation growth) happens on Wstar, so this
module exposes both the phase-space map and the neuron-space one plus
the exact linearizations tying them together.

W2 is stored with output rows (n x L): x' = W2 @ y + b2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

import numpy as np

from . import _kernels
from .activations import ACTIVATIONS, Activation, get as get_activation
from .dynamics import GUARD, DivergenceError


@dataclass
class Layer:
    weights: np.ndarray  # (rows, cols)
    bias: np.ndarray  # (rows,)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.bias = np.asarray(self.bias, dtype=float)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError("layer shape mismatch")


@dataclass
class Mlp:
    layers: list
    activation: Activation
    map_id: str | None = None
    training_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.activation, str):
            self.activation = get_activation(self.activation)
        if len(self.layers) < 2:
            raise ValueError("need at least one hidden layer plus the output layer")
        for a, b in zip(self.layers, self.layers[1:]):
            if b.weights.shape[1] != a.weights.shape[0]:
                raise ValueError("layer shape chain inconsistent")
        if not all(np.all(np.isfinite(l.weights)) and np.all(np.isfinite(l.bias))
                   for l in self.layers):
            raise ValueError("non-finite parameters")

    @property
    def n_in(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def n_out(self) -> int:
        return self.layers[-1].weights.shape[0]

    @property
    def dims(self) -> list:
        return [self.n_in] + [l.weights.shape[0] for l in self.layers]

    @property
    def single_hidden(self) -> bool:
        return len(self.layers) == 2

    @property
    def n_params(self) -> int:
        return sum(l.weights.size + l.bias.size for l in self.layers)


class EffectivePair(NamedTuple):
    wstar: np.ndarray  # (L, L), rank <= n
    bstar: np.ndarray  # (L,)


def _require_single_hidden(net: Mlp) -> None:
    if not net.single_hidden:
        raise ValueError("neuron map is defined for a single hidden layer")


def forward(net: Mlp, x) -> np.ndarray:
    """Evaluate the net; x may be one state or a batch of row states."""
    h = np.asarray(x, dtype=float)
    for layer in net.layers[:-1]:
        h = net.activation.value(h @ layer.weights.T + layer.bias)
    out = net.layers[-1]
    return h @ out.weights.T + out.bias


def jacobian(net: Mlp, x) -> np.ndarray:
    """Analytic d forward / dx at one state: W_{N+1} G_N W_N ... G_1 W_1."""
    h = np.asarray(x, dtype=float)
    jac = None
    for layer in net.layers[:-1]:
        z = layer.weights @ h + layer.bias
        gp = net.activation.deriv(z)
        jac = gp[:, None] * layer.weights if jac is None else gp[:, None] * (layer.weights @ jac)
        h = net.activation.value(z)
    out = net.layers[-1]
    return out.weights @ jac if jac is not None else out.weights.copy()


def neuron_encode(net: Mlp, x) -> np.ndarray:
    """Project a phase-space state into neuron space: y = g(W1 x + b1)."""
    _require_single_hidden(net)
    w1, b1 = net.layers[0].weights, net.layers[0].bias
    return net.activation.value(np.asarray(x, dtype=float) @ w1.T + b1)


def decode(net: Mlp, y) -> np.ndarray:
    """Back to phase space: x = W2 y + b2."""
    _require_single_hidden(net)
    w2, b2 = net.layers[1].weights, net.layers[1].bias
    return np.asarray(y, dtype=float) @ w2.T + b2


def effective_pair(net: Mlp) -> EffectivePair:
    """The neuron-space affine pair (Wstar = W1 W2, bstar = W1 b2 + b1)."""
    _require_single_hidden(net)
    w1, b1 = net.layers[0].weights, net.layers[0].bias
    w2, b2 = net.layers[1].weights, net.layers[1].bias
    return EffectivePair(w1 @ w2, w1 @ b2 + b1)


def neuron_step(net: Mlp, y, pair: EffectivePair | None = None) -> np.ndarray:
    """One neuron-space step y' = g(Wstar y + bstar)."""
    p = pair if pair is not None else effective_pair(net)
    return net.activation.value(np.asarray(y, dtype=float) @ p.wstar.T + p.bstar)


def perturbation_growth(net: Mlp, y, dy, pair: EffectivePair | None = None) -> np.ndarray:
    """Exact linearization of neuron_step: dy' = g'(Wstar y + bstar) * (Wstar dy)."""
    p = pair if pair is not None else effective_pair(net)
    z = p.wstar @ np.asarray(y, dtype=float) + p.bstar
    return net.activation.deriv(z) * (p.wstar @ np.asarray(dy, dtype=float))


def multilayer_growth(net: Mlp, x, dx) -> np.ndarray:
    """Phase-space perturbation through any depth: W_{N+1}G_N...G_1W_1 dx."""
    h = np.asarray(x, dtype=float)
    v = np.asarray(dx, dtype=float)
    for layer in net.layers[:-1]:
        z = layer.weights @ h + layer.bias
        v = net.activation.deriv(z) * (layer.weights @ v)
        h = net.activation.value(z)
    return net.layers[-1].weights @ v


def save_model(net: Mlp, path) -> None:
    doc = {
        "map_id": net.map_id,
        "dims": net.dims,
        "layers": [
            {
                "rows": l.weights.shape[0],
                "cols": l.weights.shape[1],
                "weights": [float(v) for v in l.weights.ravel()],  # row-major
                "bias": [float(v) for v in l.bias],
            }
            for l in net.layers
        ],
        "activation": net.activation.name,
        "training_meta": net.training_meta,
    }
    with open(str(path), "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _net_from_doc(doc: dict) -> Mlp:
    layers = [
        Layer(
            np.array(spec["weights"], dtype=float).reshape(spec["rows"], spec["cols"]),
            np.array(spec["bias"], dtype=float),
        )
        for spec in doc["layers"]
    ]
    net = Mlp(layers, get_activation(doc["activation"]), doc.get("map_id"),
              doc.get("training_meta", {}))
    if net.dims != list(doc["dims"]):
        raise ValueError(f"dims field {doc['dims']} does not match layer shapes {net.dims}")
    return net


def load_model(path) -> Mlp:
    with open(str(path)) as fh:
        return _net_from_doc(json.load(fh))


def bundled_model(name: str) -> Mlp:
    """Load one of the reference nets shipped with the package."""
    ref = resources.files(__package__).joinpath("models").joinpath(f"{name}.json")
    return _net_from_doc(json.loads(ref.read_text()))


class MlpMap:
    """DiscreteMap adapter so a trained net can stand in for the truth map."""

    def __init__(self, net: Mlp, guard: float = GUARD):
        self.net = net
        self.guard = float(guard)
        self.map_id = f"nn-{net.map_id}" if net.map_id else "nn"
        if net.single_hidden and net.activation.name in ACTIVATIONS:
            self._code = net.activation.code
        else:
            self._code = None

    @property
    def dim(self) -> int:
        return self.net.n_in

    def _wb(self):
        l1, l2 = self.net.layers
        return l1.weights, l1.bias, l2.weights, l2.bias

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self._code is None:
            return forward(self.net, x)
        w1, b1, w2, b2 = self._wb()
        out = np.empty(self.net.n_out)
        hidden = np.empty(w1.shape[0])
        _kernels.mlp_apply(w1, b1, w2, b2, self._code, np.asarray(x, dtype=float), out, hidden)
        return out

    def iterate(self, x0: np.ndarray, n: int) -> np.ndarray:
        if self._code is None:
            traj = np.empty((n + 1, self.dim))
            traj[0] = np.asarray(x0, dtype=float)
            for k in range(n):
                traj[k + 1] = forward(self.net, traj[k])
                if not np.all(np.isfinite(traj[k + 1])) or np.any(np.abs(traj[k + 1]) > self.guard):
                    raise DivergenceError(k + 1)
            return traj
        w1, b1, w2, b2 = self._wb()
        traj, bad = _kernels.mlp_iterate(w1, b1, w2, b2, self._code,
                                         np.asarray(x0, dtype=float), int(n), self.guard)
        if bad >= 0:
            raise DivergenceError(bad)
        return traj

    def advance_block(self, states: np.ndarray, n: int) -> None:
        if self._code is None:
            for _ in range(n):
                states[:] = forward(self.net, states)
            return
        w1, b1, w2, b2 = self._wb()
        _kernels.mlp_advance_block(w1, b1, w2, b2, self._code, states, int(n))

    def params_dict(self) -> dict:
        return {"activation": self.net.activation.name, "dims": self.net.dims}
