"""Reference chaotic maps.

Two discrete-time systems drive everything downstream:

* ``Lorenz63Map`` -- the time-dt flow map of the Lorenz-63 ODE, realised
  by adaptive Dormand-Prince 4(5) integration restarted on every map
  step, so one "application" of the map is one dt of flow time.
* ``HenonMap`` -- the closed-form Henon map, together with its exact
  three sub-step factorisation (stretch/fold, compression, reflection).

Both expose the same small surface (``dim``, ``apply``, ``iterate``,
``advance_block``) that the emulator nets implement as well, so FTLE and
trajectory code never needs to know which side it is probing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

GUARD = 1.0e6


class DivergenceError(RuntimeError):
    """Raised when an orbit leaves the finite-guard box.

    `step` is the 1-based index of the first offending map step.
    """

    def __init__(self, step: int, message: str | None = None):
        super().__init__(message or f"orbit diverged at step {step}")
        self.step = step


@dataclass(frozen=True)
class L63Params:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    dt: float = 0.01
    rtol: float = 1.0e-9
    atol: float = 1.0e-12


@dataclass(frozen=True)
class HenonParams:
    a: float = 1.4
    b: float = 0.3


class Lorenz63Map:
    """Discrete map x_{k+1} = flow_dt(x_k) for the Lorenz-63 ODE."""

    map_id = "lorenz63"
    dim = 3

    def __init__(self, params: L63Params | None = None, guard: float = GUARD):
        self.params = params or L63Params()
        self.guard = float(guard)

    def rhs(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        return np.array([
            p.sigma * (x[1] - x[0]),
            p.rho * x[0] - x[1] - x[0] * x[2],
            -p.beta * x[2] + x[0] * x[1],
        ])

    def rhs_jacobian(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        return np.array([
            [-p.sigma, p.sigma, 0.0],
            [p.rho - x[2], -1.0, -x[0]],
            [x[1], x[0], -p.beta],
        ])

    def apply(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        out = _kernels.l63_advance(
            float(x[0]), float(x[1]), float(x[2]),
            p.sigma, p.rho, p.beta, p.dt, p.rtol, p.atol,
        )
        return np.array(out)

    def apply_fixed(self, x: np.ndarray, n_sub: int = 1) -> np.ndarray:
        """One dt step with `n_sub` fixed-width internal stages.

        Bypasses step-size control; exists to measure convergence order.
        """
        p = self.params
        out = _kernels.l63_advance_fixed(
            float(x[0]), float(x[1]), float(x[2]),
            p.sigma, p.rho, p.beta, p.dt, int(n_sub),
        )
        return np.array(out)

    def iterate(self, x0: np.ndarray, n: int) -> np.ndarray:
        """n map steps; returns the (n+1, 3) orbit including x0."""
        p = self.params
        traj, bad = _kernels.l63_iterate(
            np.asarray(x0, dtype=float), int(n),
            p.sigma, p.rho, p.beta, p.dt, p.rtol, p.atol, self.guard,
        )
        if bad >= 0:
            raise DivergenceError(bad)
        return traj

    def advance_block(self, states: np.ndarray, n: int) -> None:
        """Advance every row of `states` by n map steps, in place."""
        p = self.params
        _kernels.l63_advance_block(states, int(n), p.sigma, p.rho, p.beta, p.dt, p.rtol, p.atol)

    def params_dict(self) -> dict:
        p = self.params
        return {"sigma": p.sigma, "rho": p.rho, "beta": p.beta, "dt": p.dt}


class HenonMap:
    """x' = 1 - a x^2 + y, y' = b x."""

    map_id = "henon"
    dim = 2

    def __init__(self, params: HenonParams | None = None, guard: float = GUARD):
        self.params = params or HenonParams()
        self.guard = float(guard)

    def apply(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        return np.array(_kernels.henon_apply(float(x[0]), float(x[1]), p.a, p.b))

    def substeps(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Factor one step into stretch/fold -> compression -> reflection.

        The third returned state is exactly `apply(x)` (same float ops).
        """
        p = self.params
        x0, y0 = float(x[0]), float(x[1])
        s1 = np.array([x0, 1.0 - p.a * x0 * x0 + y0])
        s2 = np.array([p.b * s1[0], s1[1]])
        s3 = np.array([s2[1], s2[0]])
        return s1, s2, s3

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        return np.array([[-2.0 * p.a * float(x[0]), 1.0], [p.b, 0.0]])

    def fixed_point(self) -> np.ndarray:
        """The attractor-side fixed point, in closed form."""
        p = self.params
        xf = (p.b - 1.0 + np.sqrt((1.0 - p.b) ** 2 + 4.0 * p.a)) / (2.0 * p.a)
        return np.array([xf, p.b * xf])

    def iterate(self, x0: np.ndarray, n: int) -> np.ndarray:
        p = self.params
        traj, bad = _kernels.henon_iterate(np.asarray(x0, dtype=float), int(n), p.a, p.b, self.guard)
        if bad >= 0:
            raise DivergenceError(bad)
        return traj

    def advance_block(self, states: np.ndarray, n: int) -> None:
        p = self.params
        _kernels.henon_advance_block(states, int(n), p.a, p.b)

    def params_dict(self) -> dict:
        p = self.params
        return {"a": p.a, "b": p.b}


MAPS = {"lorenz63": Lorenz63Map, "henon": HenonMap}


def make_map(map_id: str, **kwargs):
    """Instantiate a registered map from its string id."""
    try:
        cls = MAPS[map_id]
    except KeyError:
        raise ValueError(f"unknown map '{map_id}' (have: {sorted(MAPS)})") from None
    if kwargs:
        params_cls = L63Params if map_id == "lorenz63" else HenonParams
        return cls(params_cls(**kwargs))
    return cls()
