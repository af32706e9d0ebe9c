"""Finite-time Lyapunov exponents and truth-vs-emulator comparison.

The N_t-step Jacobian is estimated by central finite differences: the
2n probe states x0 +/- eps e_i are advanced N_t map steps and column i
is their scaled difference.  lambda is ln(sqrt(sigma_max))/(N_t*dt) with
sigma_max the top eigenvalue of J'J — a *per unit time* rate (dt=1 for
the Henon map, so per-step and per-unit-time coincide there).  The
per-step value is carried alongside in every record.

The comparison protocol pairs random starts on the truth attractor with
their nearest neighbors on the emulator's attractor (built by running
the emulator through the same pool protocol as the truth map) and probes
both systems from the paired starts.

Long-run exponents cannot come from the probe scheme — the probes leave
the linear regime after a few dozen steps — so `long_run_lyapunov`
propagates a renormalized tangent vector through one-step FD Jacobians
instead.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .dataset import DEFAULT_INIT_BOX, DEFAULT_POOL_SHAPE, PairPool, attractor_cloud, generate_pool
from .dynamics import DivergenceError, make_map
from .network import Mlp, MlpMap
from .rng import CLOUD, PAIRING, stream

DEFAULT_EPS = 1.0e-9


def map_dt(map_obj) -> float:
    """Physical time per map step (1 for intrinsically discrete maps)."""
    return getattr(getattr(map_obj, "params", None), "dt", 1.0)


@dataclass(frozen=True)
class FtleRecord:
    start: np.ndarray
    n_steps: int
    lambda_max: float  # per unit time
    lambda_per_step: float
    sigma_max: float


@dataclass
class FtleComparison:
    nt_list: list
    starts: np.ndarray  # (m, dim) truth-side start points
    net_starts: np.ndarray  # (m, dim) paired emulator-side starts
    pair_distances: np.ndarray  # (m,)
    lam_truth: dict  # nt -> (m,) with NaN where dropped
    lam_net: dict  # nt -> (m,)
    rms_error: dict = field(default_factory=dict)  # nt -> float over surviving pairs
    dropped: dict = field(default_factory=dict)  # nt -> int
    meta: dict = field(default_factory=dict)


def _probe_block(x0: np.ndarray, eps: float) -> np.ndarray:
    """Rows: x0+eps*e_0, x0-eps*e_0, x0+eps*e_1, ... (2*dim probes)."""
    dim = x0.shape[0]
    block = np.repeat(x0[None, :], 2 * dim, axis=0)
    for i in range(dim):
        block[2 * i, i] += eps
        block[2 * i + 1, i] -= eps
    return block


def _advance(map_obj, states: np.ndarray, n: int, jobs: int = 1) -> None:
    if jobs > 1 and states.shape[0] > 1:
        chunks = np.array_split(np.arange(states.shape[0]), jobs)
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            list(ex.map(lambda idx: map_obj.advance_block(states[idx[0]:idx[-1] + 1], n),
                        [c for c in chunks if c.size]))
    else:
        map_obj.advance_block(states, n)


def _jac_from_probes(probes: np.ndarray, eps: float) -> np.ndarray:
    dim = probes.shape[0] // 2
    return ((probes[0::2] - probes[1::2]) / (2.0 * eps)).T


def fd_jacobian(map_obj, x0, n_steps: int, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Central-difference Jacobian of n_steps map applications at x0."""
    if not n_steps >= 1:
        raise ValueError("n_steps must be >= 1")
    if not eps > 0:
        raise ValueError("eps must be > 0")
    probes = _probe_block(np.asarray(x0, dtype=float), eps)
    map_obj.advance_block(probes, int(n_steps))
    guard = getattr(map_obj, "guard", np.inf)
    if not np.all(np.isfinite(probes)) or np.any(np.abs(probes) > guard):
        raise DivergenceError(n_steps, "probe trajectory diverged")
    return _jac_from_probes(probes, eps)


def _lambda_from_jac(jac: np.ndarray, n_steps: int, dt: float):
    sigma_max = float(np.linalg.eigvalsh(jac.T @ jac)[-1])
    if sigma_max <= 0.0:
        return -math.inf, -math.inf, sigma_max
    per_step = math.log(math.sqrt(sigma_max)) / n_steps
    return per_step / dt, per_step, sigma_max


def max_ftle(map_obj, x0, n_steps: int, dt: float | None = None,
             eps: float = DEFAULT_EPS) -> FtleRecord:
    """Largest finite-time Lyapunov exponent at one start point."""
    x0 = np.asarray(x0, dtype=float)
    dt = map_dt(map_obj) if dt is None else float(dt)
    jac = fd_jacobian(map_obj, x0, n_steps, eps)
    lam, per_step, sigma = _lambda_from_jac(jac, int(n_steps), dt)
    return FtleRecord(x0, int(n_steps), lam, per_step, sigma)


def pair_points(cloud_a: np.ndarray, cloud_b: np.ndarray, n: int, seed: int = 0):
    """n random cloud_a points, each matched to its nearest cloud_b point.

    Returns (starts_a, matched_b, distances).
    """
    cloud_a = np.asarray(cloud_a, dtype=float)
    cloud_b = np.asarray(cloud_b, dtype=float)
    if cloud_a.shape[0] == 0 or cloud_b.shape[0] == 0:
        raise ValueError("empty cloud")
    if n > cloud_a.shape[0]:
        raise ValueError(f"cannot draw {n} starts from a {cloud_a.shape[0]}-point cloud")
    rng = stream(seed, PAIRING)
    idx = rng.choice(cloud_a.shape[0], size=n, replace=False)
    starts = cloud_a[np.sort(idx)]
    dist, j = cKDTree(cloud_b).query(starts, k=1)
    return starts, cloud_b[j], np.asarray(dist, dtype=float)


def emulator_cloud_pool(net: Mlp, map_id: str, seed: int, jobs: int = 1,
                        n_traj: int | None = None) -> PairPool:
    """Run the emulator through the truth map's pool protocol."""
    shape = dict(DEFAULT_POOL_SHAPE)
    if n_traj is not None:
        shape["n_traj"] = n_traj
    return generate_pool(MlpMap(net), shape["n_traj"], shape["n_steps"],
                         shape["n_discard"], DEFAULT_INIT_BOX[map_id], seed, jobs=jobs)


def ftle_compare(truth_map, net: Mlp | None, pool: PairPool, n: int = 2000,
                 nt_list=(50,), dt: float | None = None, eps: float = DEFAULT_EPS,
                 seed: int = 0, cloud_pool: PairPool | None = None,
                 jobs: int = 1) -> FtleComparison:
    """Paired truth/emulator FTLE over n starts at each horizon in nt_list.

    Probe trajectories are advanced incrementally through the ascending
    horizons, so a multi-horizon comparison costs the same as its longest
    horizon.  Pairs whose probes diverge are dropped from the statistics
    and counted per horizon.  `net=None` compares the truth map against
    itself (a zero-error diagnostic of the pairing/probe machinery).
    """
    if truth_map is None:
        truth_map = make_map(pool.map_id, **pool.map_params)
    dt = map_dt(truth_map) if dt is None else float(dt)
    nt_list = sorted(int(v) for v in nt_list)
    if nt_list[0] < 1:
        raise ValueError("horizons must be >= 1")

    net_map = truth_map if net is None else MlpMap(net)
    if cloud_pool is None:
        if net is None:
            cloud_pool = pool
        else:
            cloud_seed = int(stream(seed, CLOUD).integers(0, 2**62))
            cloud_pool = emulator_cloud_pool(net, pool.map_id, cloud_seed, jobs=jobs)
    truth_cloud = attractor_cloud(pool)
    net_cloud = attractor_cloud(cloud_pool)
    starts, net_starts, distances = pair_points(truth_cloud, net_cloud, n, seed)

    dim = starts.shape[1]
    m = starts.shape[0]
    probes_truth = np.vstack([_probe_block(s, eps) for s in starts])
    probes_net = np.vstack([_probe_block(s, eps) for s in net_starts])

    comp = FtleComparison(nt_list, starts, net_starts, distances, {}, {})
    comp.meta = {"n": n, "seed": seed, "eps": eps, "dt": dt,
                 "map_id": pool.map_id, "pair_distance_mean": float(distances.mean())}
    done = 0
    guard_t = getattr(truth_map, "guard", np.inf)
    guard_n = getattr(net_map, "guard", np.inf)
    for nt in nt_list:
        delta = nt - done
        if delta:
            _advance(truth_map, probes_truth, delta, jobs)
            _advance(net_map, probes_net, delta, jobs)
        done = nt
        lam_t = np.full(m, np.nan)
        lam_n = np.full(m, np.nan)
        for i in range(m):
            bt = probes_truth[i * 2 * dim : (i + 1) * 2 * dim]
            bn = probes_net[i * 2 * dim : (i + 1) * 2 * dim]
            if np.all(np.isfinite(bt)) and np.all(np.abs(bt) <= guard_t):
                lam_t[i] = _lambda_from_jac(_jac_from_probes(bt, eps), nt, dt)[0]
            if np.all(np.isfinite(bn)) and np.all(np.abs(bn) <= guard_n):
                lam_n[i] = _lambda_from_jac(_jac_from_probes(bn, eps), nt, dt)[0]
        valid = np.isfinite(lam_t) & np.isfinite(lam_n)
        comp.lam_truth[nt] = lam_t
        comp.lam_net[nt] = lam_n
        comp.dropped[nt] = int(m - valid.sum())
        diff = lam_n[valid] - lam_t[valid]
        comp.rms_error[nt] = float(np.sqrt(np.mean(diff * diff))) if diff.size else float("nan")
    return comp


def write_scatter(comp: FtleComparison, csv_path) -> None:
    """Scatter CSV (one row per pair per horizon) plus a JSON summary."""
    csv_path = str(csv_path)
    dim = comp.starts.shape[1]
    header = [f"x0{ax}" for ax in ("x", "y", "z")[:dim]] + ["lambda_truth", "lambda_nn", "Nt"]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for nt in comp.nt_list:
            lam_t, lam_n = comp.lam_truth[nt], comp.lam_net[nt]
            for i in range(comp.starts.shape[0]):
                writer.writerow(
                    [format(v, ".17g") for v in comp.starts[i]]
                    + [format(lam_t[i], ".17g"), format(lam_n[i], ".17g"), nt]
                )
    summary = {
        "rms_error": {str(nt): comp.rms_error[nt] for nt in comp.nt_list},
        "dropped": {str(nt): comp.dropped[nt] for nt in comp.nt_list},
        **comp.meta,
    }
    with open(csv_path.removesuffix(".csv") + "_summary.json", "w") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")


def long_run_lyapunov(map_obj, x0, n_steps: int, dt: float | None = None,
                      eps: float = DEFAULT_EPS) -> float:
    """Largest Lyapunov exponent by renormalized tangent propagation.

    Each step multiplies the running tangent vector by the one-step FD
    Jacobian and renormalizes, so the estimate stays in the linear regime
    for arbitrarily long horizons (unlike the N_t-step probe scheme).
    """
    dt = map_dt(map_obj) if dt is None else float(dt)
    x = np.asarray(x0, dtype=float).copy()
    v = np.ones(x.shape[0]) / math.sqrt(x.shape[0])
    total = 0.0
    for _ in range(int(n_steps)):
        jac = fd_jacobian(map_obj, x, 1, eps)
        v = jac @ v
        norm = float(np.linalg.norm(v))
        if norm <= 0.0 or not math.isfinite(norm):
            raise DivergenceError(1, "tangent vector collapsed or blew up")
        total += math.log(norm)
        v /= norm
        x = map_obj.apply(x)
    return total / (n_steps * dt)


def long_run_lyapunov_batch(map_obj, starts, n_steps: int, dt: float | None = None,
                            eps: float = DEFAULT_EPS) -> np.ndarray:
    """`long_run_lyapunov` for many starts at once (same math, batched).

    All probe blocks and the base states ride in a single advance per
    step, so averaging over hundreds of starts stays cheap.
    """
    dt = map_dt(map_obj) if dt is None else float(dt)
    x = np.atleast_2d(np.asarray(starts, dtype=float)).copy()
    m, dim = x.shape
    v = np.full((m, dim), 1.0 / math.sqrt(dim))
    offsets = np.zeros((2 * dim, dim))
    for i in range(dim):
        offsets[2 * i, i] = eps
        offsets[2 * i + 1, i] = -eps
    total = np.zeros(m)
    block = np.empty((m * 2 * dim + m, dim))
    for _ in range(int(n_steps)):
        probes = (x[:, None, :] + offsets[None, :, :]).reshape(m * 2 * dim, dim)
        block[: m * 2 * dim] = probes
        block[m * 2 * dim :] = x
        map_obj.advance_block(block, 1)
        moved = block[: m * 2 * dim].reshape(m, dim, 2, dim)
        jac = (moved[:, :, 0, :] - moved[:, :, 1, :]) / (2.0 * eps)  # (m, i, out) -> J^T
        v = np.einsum("mio,mi->mo", jac, v)
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms <= 0.0) or not np.all(np.isfinite(norms)):
            raise DivergenceError(1, "tangent vector collapsed or blew up")
        total += np.log(norms)
        v /= norms[:, None]
        x = block[m * 2 * dim :].copy()
    return total / (n_steps * dt)
