"""Compiled numerical kernels.

Hot loops (ODE integration, map iteration, small-net evaluation) are
compiled with numba when available; setting ``CHAOSNN_DISABLE_NUMBA=1``
or a missing numba install falls back to the identical pure-Python code
paths.  Everything here operates on plain floats/arrays so the two modes
produce the same trajectories up to the usual IEEE determinism.

A single compiled ``apply`` underlies both one-step application and long
iteration of each map, so stored (input, output) pairs re-verify
bit-exactly against a fresh ``apply`` call.
"""
from __future__ import annotations

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("CHAOSNN_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - exercised via env flag instead
        NUMBA_ENABLED = False
if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# Dormand-Prince 4(5) tableau (FSAL).  E* is the difference between the
# 5th-order propagated solution and the embedded 4th-order one.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1 = 71.0 / 57600.0
_E3 = -71.0 / 16695.0
_E4 = 71.0 / 1920.0
_E5 = -17253.0 / 339200.0
_E6 = 22.0 / 525.0
_E7 = -1.0 / 40.0


@njit(cache=True, nogil=True)
def _l63_rhs(x, y, z, sigma, rho, beta):
    return sigma * (y - x), rho * x - y - x * z, -beta * z + x * y


@njit(cache=True, nogil=True)
def l63_advance(x, y, z, sigma, rho, beta, span, rtol, atol):
    """Advance the Lorenz-63 flow by exactly `span` with adaptive DP45.

    Returns the end state as a (x, y, z) tuple; NaNs signal integrator
    breakdown (persistent step rejection).
    """
    t = 0.0
    h = span
    k1x, k1y, k1z = _l63_rhs(x, y, z, sigma, rho, beta)
    rejects = 0
    while t < span:
        if h > span - t:
            h = span - t
        k2x, k2y, k2z = _l63_rhs(x + h * _A21 * k1x, y + h * _A21 * k1y, z + h * _A21 * k1z, sigma, rho, beta)
        k3x, k3y, k3z = _l63_rhs(
            x + h * (_A31 * k1x + _A32 * k2x),
            y + h * (_A31 * k1y + _A32 * k2y),
            z + h * (_A31 * k1z + _A32 * k2z),
            sigma, rho, beta,
        )
        k4x, k4y, k4z = _l63_rhs(
            x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
            y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y),
            z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z),
            sigma, rho, beta,
        )
        k5x, k5y, k5z = _l63_rhs(
            x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
            y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y),
            z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z),
            sigma, rho, beta,
        )
        k6x, k6y, k6z = _l63_rhs(
            x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x),
            y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y),
            z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z),
            sigma, rho, beta,
        )
        nx = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        ny = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        nz = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        k7x, k7y, k7z = _l63_rhs(nx, ny, nz, sigma, rho, beta)
        ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        sx = atol + rtol * max(abs(x), abs(nx))
        sy = atol + rtol * max(abs(y), abs(ny))
        sz = atol + rtol * max(abs(z), abs(nz))
        err = math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2 + (ez / sz) ** 2) / 3.0)
        if err <= 1.0:
            t += h
            x, y, z = nx, ny, nz
            k1x, k1y, k1z = k7x, k7y, k7z  # FSAL
            rejects = 0
        else:
            rejects += 1
            if rejects > 60 or not math.isfinite(err):
                return math.nan, math.nan, math.nan
        if err > 0.0 and math.isfinite(err):
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
            h *= fac
        else:
            h *= 5.0
    return x, y, z


@njit(cache=True, nogil=True)
def l63_advance_fixed(x, y, z, sigma, rho, beta, span, n_sub):
    """One `span` advance with n_sub equal DP45 stages, no step control.

    Only used to expose the integrator's convergence order; the production
    path is the adaptive `l63_advance`.
    """
    h = span / n_sub
    for _ in range(n_sub):
        k1x, k1y, k1z = _l63_rhs(x, y, z, sigma, rho, beta)
        k2x, k2y, k2z = _l63_rhs(x + h * _A21 * k1x, y + h * _A21 * k1y, z + h * _A21 * k1z, sigma, rho, beta)
        k3x, k3y, k3z = _l63_rhs(
            x + h * (_A31 * k1x + _A32 * k2x),
            y + h * (_A31 * k1y + _A32 * k2y),
            z + h * (_A31 * k1z + _A32 * k2z),
            sigma, rho, beta,
        )
        k4x, k4y, k4z = _l63_rhs(
            x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
            y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y),
            z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z),
            sigma, rho, beta,
        )
        k5x, k5y, k5z = _l63_rhs(
            x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
            y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y),
            z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z),
            sigma, rho, beta,
        )
        k6x, k6y, k6z = _l63_rhs(
            x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x),
            y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y),
            z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z),
            sigma, rho, beta,
        )
        x = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        y = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        z = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
    return x, y, z


@njit(cache=True, nogil=True)
def l63_iterate(state, n, sigma, rho, beta, dt, rtol, atol, guard):
    """n map steps from `state`; returns (trajectory, diverged_step).

    trajectory has n+1 rows; diverged_step is -1 when the whole run stayed
    finite and within |component| <= guard, otherwise the first bad step.
    """
    out = np.empty((n + 1, 3))
    x, y, z = state[0], state[1], state[2]
    out[0, 0], out[0, 1], out[0, 2] = x, y, z
    for k in range(n):
        x, y, z = l63_advance(x, y, z, sigma, rho, beta, dt, rtol, atol)
        out[k + 1, 0], out[k + 1, 1], out[k + 1, 2] = x, y, z
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)) or (
            abs(x) > guard or abs(y) > guard or abs(z) > guard
        ):
            return out[: k + 2], k + 1
    return out, -1


@njit(cache=True, nogil=True)
def l63_advance_block(states, n, sigma, rho, beta, dt, rtol, atol):
    """Advance each row of `states` by n map steps, in place."""
    for p in range(states.shape[0]):
        x, y, z = states[p, 0], states[p, 1], states[p, 2]
        for _ in range(n):
            x, y, z = l63_advance(x, y, z, sigma, rho, beta, dt, rtol, atol)
        states[p, 0], states[p, 1], states[p, 2] = x, y, z


@njit(cache=True, nogil=True)
def henon_apply(x, y, a, b):
    # composed exactly as stretch -> compression -> reflection
    y1 = 1.0 - a * x * x + y
    x2 = b * x
    return y1, x2


@njit(cache=True, nogil=True)
def henon_iterate(state, n, a, b, guard):
    out = np.empty((n + 1, 2))
    x, y = state[0], state[1]
    out[0, 0], out[0, 1] = x, y
    for k in range(n):
        x, y = henon_apply(x, y, a, b)
        out[k + 1, 0], out[k + 1, 1] = x, y
        if not (math.isfinite(x) and math.isfinite(y)) or abs(x) > guard or abs(y) > guard:
            return out[: k + 2], k + 1
    return out, -1


@njit(cache=True, nogil=True)
def henon_advance_block(states, n, a, b):
    for p in range(states.shape[0]):
        x, y = states[p, 0], states[p, 1]
        for _ in range(n):
            x, y = henon_apply(x, y, a, b)
        states[p, 0], states[p, 1] = x, y


@njit(cache=True, nogil=True)
def _act(code, x):
    if code == 0:
        return math.tanh(x)
    elif code == 1:
        if x >= 0.0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)
    elif code == 2:
        return x / (1.0 + abs(x))
    elif code == 3:
        return math.exp(-x * x)
    elif code == 4:
        return max(x, 0.0) + math.log1p(math.exp(-abs(x)))
    elif code == 5:
        return x if x > 0.0 else 0.0
    elif code == 6:
        t = 1.0 - abs(x)
        return t if t > 0.0 else 0.0
    return x


@njit(cache=True, nogil=True)
def mlp_apply(W1, b1, W2, b2, code, x, out, hidden):
    """Single-hidden-layer net evaluated with scalar loops (BLAS-free)."""
    L, n_in = W1.shape
    n_out = W2.shape[0]
    for j in range(L):
        s = b1[j]
        for i in range(n_in):
            s += W1[j, i] * x[i]
        hidden[j] = _act(code, s)
    for o in range(n_out):
        s = b2[o]
        for j in range(L):
            s += W2[o, j] * hidden[j]
        out[o] = s


@njit(cache=True, nogil=True)
def mlp_iterate(W1, b1, W2, b2, code, state, n, guard):
    dim = state.shape[0]
    L = W1.shape[0]
    out = np.empty((n + 1, dim))
    hidden = np.empty(L)
    cur = state.copy()
    nxt = np.empty(dim)
    for i in range(dim):
        out[0, i] = cur[i]
    for k in range(n):
        mlp_apply(W1, b1, W2, b2, code, cur, nxt, hidden)
        bad = False
        for i in range(dim):
            out[k + 1, i] = nxt[i]
            cur[i] = nxt[i]
            if not math.isfinite(nxt[i]) or abs(nxt[i]) > guard:
                bad = True
        if bad:
            return out[: k + 2], k + 1
    return out, -1


@njit(cache=True, nogil=True)
def mlp_advance_block(W1, b1, W2, b2, code, states, n):
    L = W1.shape[0]
    dim = states.shape[1]
    hidden = np.empty(L)
    nxt = np.empty(dim)
    for p in range(states.shape[0]):
        cur = states[p].copy()
        for _ in range(n):
            mlp_apply(W1, b1, W2, b2, code, cur, nxt, hidden)
            for i in range(dim):
                cur[i] = nxt[i]
        for i in range(dim):
            states[p, i] = cur[i]
