"""Neuron-count lower bounds and the cubic-expansion error of a net.

Four closed-form estimates of how many hidden neurons a single-hidden-
layer net needs before it can represent a degree-d polynomial map (the
chaotic maps here are degree 2), plus machinery that replaces tanh with
its cubic Taylor truncation to turn a trained net into an explicit
polynomial and measure how far that polynomial sits from the truth map.

The combinatorial bounds are computed in exact integer/rational
arithmetic; nothing here is fitted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .network import Mlp
from .rng import POLY, stream


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float
    value_ceil: int | None = None  # set where the estimate itself rounds up
    notes: str | None = None


@dataclass(frozen=True)
class CubicPoly:
    """Degree-3 polynomial map: one coefficient row per output component.

    exponents has one row per monomial (all n-variable exponent tuples of
    total degree <= 3, C(n+3,3) of them); coefficients is (n_out, n_mono).
    """

    n_vars: int
    exponents: np.ndarray  # (n_mono, n_vars) int
    coefficients: np.ndarray  # (n_out, n_mono)


@dataclass(frozen=True)
class PolyErrorReport:
    epsilon: float  # variance-normalized RMS mismatch vs the truth map
    raw_rms: float  # plain per-component RMS mismatch
    n_samples: int
    seed: int = field(default=0)


def andoni_bound(n: int, d: int, eps: float) -> BoundReport:
    """Agnostic-learning estimate n^(6d)/eps^3."""
    if n < 1 or d < 1 or not eps > 0:
        raise ValueError("require n >= 1, d >= 1, eps > 0")
    value = float(n ** (6 * d)) / float(eps) ** 3
    return BoundReport("andoni", {"n": n, "d": d, "eps": eps}, value)


def polynet_bound(n: int, d: int) -> BoundReport:
    """Width needed by an exact polynomial-activation construction."""
    if n < 1 or d < 1:
        raise ValueError("require n >= 1, d >= 1")
    value = comb(n + d, d) - (n + 1)
    return BoundReport("polynet", {"n": n, "d": d}, float(value), value_ceil=int(value))


def standard_nn_bound(n: int, d: int) -> BoundReport:
    """Parameter-counting estimate n/(2n+1) * (C(n+d,d) - 1).

    Reported unrounded; the value is generally fractional (27/7 at
    n=3, d=2, sometimes quoted rounded up to ~5).
    """
    if n < 1 or d < 1:
        raise ValueError("require n >= 1, d >= 1")
    exact = Fraction(n, 2 * n + 1) * (comb(n + d, d) - 1)
    notes = (f"exact value {exact.numerator}/{exact.denominator}; no rounding "
             "imposed (this family is sometimes quoted rounded up, e.g. ~5 "
             "at n=3, d=2)")
    return BoundReport("standard_nn", {"n": n, "d": d}, float(exact), notes=notes)


def taylor_count_bound(n: int) -> BoundReport:
    """Cubic-Taylor coefficient count: ceil((3*C(n+3,3) - n)/(2n+1))."""
    if n < 1:
        raise ValueError("require n >= 1")
    num = 3 * comb(n + 3, 3) - n
    den = 2 * n + 1
    return BoundReport("taylor_count", {"n": n}, num / den, value_ceil=-(-num // den))


def parameter_count(n: int, L: int) -> int:
    """Total parameters of an n-in/n-out single-hidden-layer net: 2nL + n + L."""
    return 2 * n * L + n + L


def monomial_basis(n_vars: int, degree: int = 3) -> np.ndarray:
    """All exponent tuples with total degree <= degree, canonical order."""
    exps = set()
    for deg in range(degree + 1):
        for combo in combinations_with_replacement(range(n_vars), deg):
            e = [0] * n_vars
            for i in combo:
                e[i] += 1
            exps.add(tuple(e))
    ordered = sorted(exps, key=lambda e: (sum(e), e))
    return np.array(ordered, dtype=int).reshape(len(ordered), n_vars)


def _poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0.0) + ca * cb
    return out


def expand_cubic(net: Mlp) -> CubicPoly:
    """Replace the activation by its cubic Taylor truncation and collect
    monomials exactly.

    tanh(z) becomes z - z^3/3 with z the full pre-activation (bias
    included); a linear activation is passed through untouched (its
    degree-1 "truncation" is exact).  Other activations are unsupported.
    """
    if not net.single_hidden:
        raise ValueError("cubic expansion needs a single hidden layer")
    if net.activation.name not in ("tanh", "linear"):
        raise ValueError(f"unsupported activation {net.activation.name!r}")
    w1, b1 = net.layers[0].weights, net.layers[0].bias
    w2, b2 = net.layers[1].weights, net.layers[1].bias
    n_vars = w1.shape[1]
    basis = monomial_basis(n_vars, 3)
    index = {tuple(e): k for k, e in enumerate(basis)}
    zero = (0,) * n_vars

    neuron_polys = []
    for j in range(w1.shape[0]):
        lin = {zero: float(b1[j])}
        for i in range(n_vars):
            e = [0] * n_vars
            e[i] = 1
            lin[tuple(e)] = float(w1[j, i])
        if net.activation.name == "linear":
            neuron_polys.append(lin)
            continue
        cube = _poly_mul(_poly_mul(lin, lin), lin)
        poly = dict(lin)
        for e, c in cube.items():
            poly[e] = poly.get(e, 0.0) - c / 3.0
        neuron_polys.append(poly)

    coeffs = np.zeros((w2.shape[0], basis.shape[0]))
    for o in range(w2.shape[0]):
        coeffs[o, index[zero]] += float(b2[o])
        for j, poly in enumerate(neuron_polys):
            for e, c in poly.items():
                coeffs[o, index[e]] += float(w2[o, j]) * c
    return CubicPoly(n_vars, basis, coeffs)


def poly_eval(poly: CubicPoly, x) -> np.ndarray:
    """Evaluate the polynomial map on one state or a batch of row states."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    mono = np.prod(pts[:, None, :] ** poly.exponents[None, :, :], axis=2)
    out = mono @ poly.coefficients.T
    return out[0] if np.asarray(x).ndim == 1 else out


def cubic_remainder_bound(net: Mlp, pre_activation_max: float) -> float:
    """Worst-case |poly - forward| per output for bounded pre-activations.

    The truncation error of tanh is |tanh(z) - (z - z^3/3)| <= (2/15)|z|^5
    for |z| <= 1; each output amplifies it by its absolute row sum of W2.
    """
    w2 = net.layers[1].weights
    return float((2.0 / 15.0) * pre_activation_max**5 * np.max(np.sum(np.abs(w2), axis=1)))


def nn_poly_error(net: Mlp, truth_map, cloud: np.ndarray, n_samples: int = 5000,
                  seed: int = 0) -> PolyErrorReport:
    """How well the net's cubic expansion tracks the truth map on-attractor.

    epsilon = sqrt( mean|poly(x) - truth(x)|^2 / mean|truth(x) - mean|^2 )
    over n_samples cloud points; the unnormalized RMS rides along.
    """
    cloud = np.asarray(cloud, dtype=float)
    if n_samples > cloud.shape[0]:
        raise ValueError(f"cloud has only {cloud.shape[0]} points")
    rng = stream(seed, POLY)
    pts = cloud[rng.choice(cloud.shape[0], size=n_samples, replace=False)]
    truth = pts.copy()
    truth_map.advance_block(truth, 1)
    pred = poly_eval(expand_cubic(net), pts)
    diff2 = np.sum((pred - truth) ** 2, axis=1)
    fluct2 = np.sum((truth - truth.mean(axis=0)) ** 2, axis=1)
    epsilon = float(np.sqrt(diff2.mean() / fluct2.mean()))
    raw_rms = float(np.sqrt(np.mean((pred - truth) ** 2)))
    return PolyErrorReport(epsilon, raw_rms, n_samples, seed)


def bounds_table(n: int, d: int, eps: float) -> list:
    """All four bounds at one (n, d, eps) setting."""
    return [
        andoni_bound(n, d, eps),
        polynet_bound(n, d),
        standard_nn_bound(n, d),
        taylor_count_bound(n),
    ]
