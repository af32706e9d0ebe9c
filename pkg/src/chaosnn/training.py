"""Levenberg-Marquardt training with Bayesian regularization.

The objective is F = beta*E_D + alpha*E_W with E_D the sum of squared
residuals over all pairs/components and E_W the sum of squared weights.
Steps solve (beta*J'J + (alpha+mu)I) dw = -(beta*J'r + alpha*w) with mu
shrunk x0.1 on accepted steps and grown x10 on rejections; after every
accepted step the regularization hyper-parameters are re-estimated from
the evidence framework:

    gamma = K - 2*alpha*tr(H^-1),  alpha = gamma/(2 E_W),
    beta = (N_res - gamma)/(2 E_D)

using the Cholesky factor the step solve already produced (H taken as
2(beta*J'J + (alpha+mu)I)).  alpha starts at 0 and beta at 1, and gamma
at the parameter count K.  There is no early stopping: exactly `epochs`
iterations unless mu exhausts, at which point the state is already
frozen at the last accepted point so stopping loses nothing.

The residual Jacobian is exact (layered chain rule, batched), no numeric
differentiation in the inner loop.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import isfinite

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .activations import Activation, get as get_activation
from .network import Layer, Mlp, forward
from .rng import INIT, SWEEP, stream

MU_FLOOR = 1.0e-20


class TrainingDivergedError(RuntimeError):
    """Loss non-finite at a point the trainer cannot back away from."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 1000
    restarts: int = 5
    mu_init: float = 0.005
    mu_scale: float = 10.0
    max_mu: float = 1.0e10
    bayes: bool = True  # re-estimate alpha/beta each accepted step
    init_scheme: str = "scaled-uniform"
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.mu_init > 0:
            raise ValueError("mu_init must be > 0")
        if not self.mu_scale > 1:
            raise ValueError("mu_scale must be > 1")
        if not self.max_mu > self.mu_init:
            raise ValueError("max_mu must exceed mu_init")
        if self.init_scheme != "scaled-uniform":
            raise ValueError(f"unknown init scheme {self.init_scheme!r}")


@dataclass
class TrainReport:
    e_data: float
    e_weights: float
    alpha: float
    beta: float
    gamma: float
    trace: list
    restart_index: int
    val_e_data: float
    n_params: int
    epochs_run: int
    config: TrainConfig | None = field(default=None, repr=False)


def _layer_shapes(dims):
    return [(dims[i + 1], dims[i]) for i in range(len(dims) - 1)]


def pack(layers) -> np.ndarray:
    return np.concatenate([np.concatenate([l.weights.ravel(), l.bias]) for l in layers])


def unpack(w: np.ndarray, dims) -> list:
    layers = []
    pos = 0
    for rows, cols in _layer_shapes(dims):
        wm = w[pos : pos + rows * cols].reshape(rows, cols)
        pos += rows * cols
        b = w[pos : pos + rows]
        pos += rows
        layers.append(Layer(wm.copy(), b.copy()))
    return layers


def init_layers(dims, rng, x_scale: float) -> list:
    """Uniform(-0.1, 0.1) everywhere; first-layer weights shrunk by the
    RMS magnitude of the training inputs so initial pre-activations are O(0.1)."""
    layers = []
    for k, (rows, cols) in enumerate(_layer_shapes(dims)):
        wm = rng.uniform(-0.1, 0.1, size=(rows, cols))
        b = rng.uniform(-0.1, 0.1, size=rows)
        if k == 0 and x_scale > 0:
            wm /= x_scale
        layers.append(Layer(wm, b))
    return layers


def _forward_cache(layers, act: Activation, X):
    acts = [np.asarray(X, dtype=float)]
    zs = []
    h = acts[0]
    for layer in layers[:-1]:
        z = h @ layer.weights.T + layer.bias
        zs.append(z)
        h = act.value(z)
        acts.append(h)
    out = h @ layers[-1].weights.T + layers[-1].bias
    return out, acts, zs


def _residuals(layers, act, X, T):
    out = _forward_cache(layers, act, X)[0]
    return (out - T).ravel()


def _residual_jacobian(layers, act, X, T):
    """Residuals r (flattened (pair, component)) and dr/dw, columns in
    pack() order: layer-1 weights row-major, layer-1 bias, layer-2 ..."""
    out, acts, zs = _forward_cache(layers, act, X)
    r = out - T
    n, n_out = r.shape
    blocks = [None] * len(layers)
    # d out / d h_last  (same for every pair)
    sens = np.broadcast_to(layers[-1].weights, (n, n_out, layers[-1].weights.shape[1]))
    for l in range(len(layers) - 2, -1, -1):
        dz = sens * act.deriv(zs[l])[:, None, :]  # d out / d z_l
        w_block = np.einsum("nop,nq->nopq", dz, acts[l])
        blocks[l] = (w_block.reshape(n * n_out, -1), dz.reshape(n * n_out, -1))
        if l > 0:
            sens = np.einsum("nop,pq->noq", dz, layers[l].weights)
    eye = np.eye(n_out)
    w_out = np.einsum("op,nq->nopq", eye, acts[-1])
    b_out = np.broadcast_to(eye, (n, n_out, n_out))
    blocks[-1] = (w_out.reshape(n * n_out, -1), b_out.reshape(n * n_out, -1))
    jac = np.hstack([piece for pair in blocks for piece in pair])
    return r.ravel(), jac


def _lm_run(dims, act, X, T, cfg: TrainConfig, w0: np.ndarray):
    """One LM optimization from initial parameter vector w0."""
    K = w0.size
    n_res = T.size
    w = w0.copy()
    alpha, beta = 0.0, 1.0
    gamma = float(K)
    mu = cfg.mu_init
    eye = np.eye(K)

    r, jac = _residual_jacobian(unpack(w, dims), act, X, T)
    e_data = float(r @ r)
    e_weights = float(w @ w)
    f = beta * e_data + alpha * e_weights
    if not isfinite(f):
        raise TrainingDivergedError("loss non-finite at initialization")

    trace = []
    epochs_run = 0
    for epoch in range(cfg.epochs):
        a_mat = beta * (jac.T @ jac)
        grad = beta * (jac.T @ r) + alpha * w
        accepted = False
        while True:
            try:
                factor = cho_factor(a_mat + (alpha + mu) * eye, lower=True)
            except LinAlgError:
                factor = None
            if factor is not None:
                dw = -cho_solve(factor, grad)
                wn = w + dw
                layers_n = unpack(wn, dims)
                rn = _residuals(layers_n, act, X, T)
                e_data_n = float(rn @ rn)
                e_weights_n = float(wn @ wn)
                fn = beta * e_data_n + alpha * e_weights_n
                if isfinite(fn) and fn < f:
                    f_before = f
                    w, e_data, e_weights = wn, e_data_n, e_weights_n
                    if cfg.bayes:
                        gamma = K - alpha * float(np.trace(cho_solve(factor, eye)))
                        alpha = gamma / (2.0 * e_weights) if e_weights > 0.0 else 0.0
                        beta = (n_res - gamma) / (2.0 * max(e_data, 1.0e-30))
                    f = beta * e_data + alpha * e_weights
                    mu = max(mu * (1.0 / cfg.mu_scale), MU_FLOOR)
                    r, jac = _residual_jacobian(unpack(w, dims), act, X, T)
                    accepted = True
                    trace.append({
                        "epoch": epoch, "accepted": True, "f_before": f_before,
                        "f_after": fn, "e_data": e_data,
                        "e_weights": e_weights, "alpha": alpha, "beta": beta,
                        "gamma": gamma, "mu": mu,
                    })
                    break
            mu *= cfg.mu_scale
            if mu > cfg.max_mu:
                break
        epochs_run = epoch + 1
        if not accepted:
            trace.append({
                "epoch": epoch, "accepted": False, "f_before": f, "f_after": f,
                "e_data": e_data, "e_weights": e_weights, "alpha": alpha,
                "beta": beta, "gamma": gamma, "mu": mu,
            })
            break  # mu exhausted; state is already the last accepted point
    return w, TrainReport(e_data, e_weights, alpha, beta, gamma, trace, -1,
                          float("nan"), K, epochs_run)


def train(dims, activation, data, cfg: TrainConfig | None = None, val=None,
          map_id: str | None = None):
    """Best-of-restarts LM training.

    dims is the full layer-size chain (e.g. [3, 4, 3]); data/val are
    (inputs, targets) row arrays.  Restart i draws its initial weights
    from substream (seed, INIT, i); selection is by E_D on `val` (the
    training set when no validation set is given).
    """
    cfg = cfg or TrainConfig()
    act = get_activation(activation) if isinstance(activation, str) else activation
    X = np.asarray(data[0], dtype=float)
    T = np.asarray(data[1], dtype=float)
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    if X.shape[1] != dims[0] or T.shape[1] != dims[-1]:
        raise ValueError(f"data dims {X.shape[1]}->{T.shape[1]} do not match arch {dims}")
    Xv, Tv = (np.asarray(val[0], dtype=float), np.asarray(val[1], dtype=float)) if val is not None else (X, T)
    x_scale = float(np.sqrt(np.mean(X * X)))

    best = None
    for i in range(cfg.restarts):
        rng = stream(cfg.seed, INIT, i)
        w0 = pack(init_layers(dims, rng, x_scale))
        w, report = _lm_run(dims, act, X, T, cfg, w0)
        layers = unpack(w, dims)
        rv = _residuals(layers, act, Xv, Tv)
        report.val_e_data = float(rv @ rv)
        report.restart_index = i
        report.config = cfg
        if best is None or report.val_e_data < best[1].val_e_data:
            best = (layers, report)
    layers, report = best
    meta = {"seed": cfg.seed, "epochs": cfg.epochs, "n_train": int(X.shape[0]),
            "restart_index": report.restart_index, "activation": act.name}
    net = Mlp(layers, act, map_id=map_id, training_meta=meta)
    return net, report


def rms_error(net: Mlp, test) -> float:
    """RMS residual over every pair and output component of the test set."""
    X = np.asarray(test[0], dtype=float)
    T = np.asarray(test[1], dtype=float)
    if X.shape[0] == 0:
        raise ValueError("empty test set")
    err = forward(net, X) - T
    return float(np.sqrt(np.mean(err * err)))


@dataclass
class SweepCell:
    neurons: int
    n_data: int
    activation: str
    seed: int
    rms: float
    ftle_rms: float
    error: str | None = None
    net: Mlp | None = field(default=None, repr=False)


def sweep(pool, neurons, n_data, activations, seeds, cfg: TrainConfig | None = None,
          test_size: int = 5000, ftle_pairs: int = 0, ftle_nt: int = 50,
          jobs: int = 1, keep_nets: bool = False, region=None) -> list:
    """Train every (neurons, n_data, activation, seed) cell of the grid.

    Returns one SweepCell per combination, ordered by grid index; cell
    failures are recorded on the cell, never raised.  `ftle_pairs` > 0
    additionally scores each net's FTLE match on that many paired starts
    (expensive; off by default).
    """
    from .dataset import sample_pairs  # local import: dataset does not need training
    from . import ftle as ftle_mod

    cfg = cfg or TrainConfig()
    grid = [(L, nd, a, s) for L in neurons for nd in n_data for a in activations for s in seeds]
    dim = pool.dim

    def run_cell(idx_cell):
        idx, (L, nd, act_name, seed) = idx_cell
        sub = stream(seed, SWEEP, idx)
        data_seed, train_seed, test_seed = (int(v) for v in sub.integers(0, 2**62, size=3))
        try:
            data = sample_pairs(pool, nd, region=region, seed=data_seed)
            test = sample_pairs(pool, min(test_size, len(pool)), seed=test_seed)
            net, _ = train([dim, L, dim], act_name, data,
                           replace(cfg, seed=train_seed), map_id=pool.map_id)
            rms = rms_error(net, test)
            ftle_rms = float("nan")
            if ftle_pairs > 0:
                cmp = ftle_mod.ftle_compare(None, net, pool, n=ftle_pairs,
                                            nt_list=[ftle_nt], seed=seed)
                ftle_rms = cmp.rms_error[ftle_nt]
            return SweepCell(L, nd, act_name, seed, rms, ftle_rms,
                             net=net if keep_nets else None)
        except Exception as exc:  # per-cell failures recorded, not fatal
            return SweepCell(L, nd, act_name, seed, float("nan"), float("nan"),
                             error=f"{type(exc).__name__}: {exc}")

    items = list(enumerate(grid))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(run_cell, items))
    return [run_cell(it) for it in items]
