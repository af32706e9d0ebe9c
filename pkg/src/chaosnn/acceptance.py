"""The package's acceptance checklist: ten numbered, self-contained checks.

Each check builds what it needs from fixed seeds (shared heavyweight
assets — pools, clouds, trained nets — are cached on an
`AcceptanceAssets` instance so the whole list runs in a few minutes) and
returns a `CriterionResult` with the measured numbers, so a failure
report carries the evidence, not just a boolean.

The checks:

 1. singular values + stretch count of the bundled 4-neuron reference net
 2. rotation/reflection angles of the bundled 2-neuron reference net
 3. attractor reconstruction by a freshly trained 4-neuron net
 4. short-horizon FTLE match of that net (N_t = 50)
 5. long-horizon FTLE collapse (N_t = 500)
 6. extrapolation from a region excluded from training
 7. 2-neuron emulation of the Henon map
 8. neuron-count bounds table + cubic-expansion error
 9. exact-linearization property suite (no training)
10. negative control: relu/linear activations must fail reconstruction
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from . import bounds as bounds_mod
from .dataset import RegionFilter, attractor_cloud, generate_pool, sample_pairs
from .dynamics import DivergenceError, HenonMap, Lorenz63Map
from .ftle import ftle_compare, long_run_lyapunov_batch, emulator_cloud_pool, fd_jacobian
from .geometry import classify_orthogonal_2d, stretch_count, svd_wstar
from .network import (Mlp, MlpMap, bundled_model, decode, forward, jacobian,
                      load_model, neuron_step, perturbation_growth)
from .rng import stream
from .training import TrainConfig, sweep, train

# Every number the checklist consumes is derived from these fixed seeds.
L63_POOL_SEED = 101
HENON_POOL_SEED = 102
SUBSAMPLE_SEED = 103
C3_VAL_SEED = 310
C3_DATA_SEED = 300  # + seed index
C3_TRAIN_SEED = 320  # + seed index
C4_CLOUD_SEED = 401
C4_PAIR_SEED = 410
C6_DATA_SEED = 600  # + seed index
C6_TRAIN_SEED = 620  # + seed index
C7_DATA_SEED = 700  # + seed index
C7_TRAIN_SEED = 720  # + seed index
C8_POLY_SEED = 800
C9_SEED = 900
C10_SWEEP_SEED = 1000

N_SEEDS = 5
BOX_L63 = np.array([[-25.0, 25.0], [-30.0, 30.0], [0.0, 55.0]])
SWEEP_NEURONS = (3, 4, 5, 6, 7, 8)
SWEEP_NDATA = (20, 30, 40, 60, 100, 150)


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.index:2d} [{status}] {self.name} ({self.runtime_s:.1f}s)"


@dataclass
class OrbitCheck:
    bounded: bool
    in_box: bool
    mean_nn: float
    orbit_to_cloud: float = float("nan")
    cloud_to_orbit: float = float("nan")
    diverged_at: int = -1

    @property
    def ok(self) -> bool:
        return self.bounded and self.in_box and self.mean_nn == self.mean_nn


def orbit_check(net: Mlp, start, n_steps: int, box=None, tree: cKDTree | None = None) -> OrbitCheck:
    """Iterate the net and score boundedness / box residency / attractor match.

    The attractor score is the larger of the two one-directional mean
    nearest-neighbour distances (orbit->cloud and cloud->orbit).  Taking the
    max matters: an orbit that collapses onto a fixed point or short cycle
    sitting near the attractor keeps orbit->cloud small, but leaves most of
    the cloud uncovered, which the reverse direction exposes.
    """
    try:
        traj = MlpMap(net).iterate(np.asarray(start, dtype=float), n_steps)
    except DivergenceError as err:
        return OrbitCheck(False, False, float("nan"), diverged_at=err.step)
    in_box = True
    if box is not None:
        box = np.asarray(box, dtype=float)
        in_box = bool(np.all(traj >= box[:, 0]) and np.all(traj <= box[:, 1]))
    if tree is None:
        return OrbitCheck(True, in_box, 0.0)
    fwd = float(tree.query(traj)[0].mean())
    cov = float(cKDTree(traj).query(tree.data)[0].mean())
    return OrbitCheck(True, in_box, max(fwd, cov), fwd, cov)


class AcceptanceAssets:
    """Lazy cache of everything the checks share.

    `models_dir` overrides where the two reference model files come from
    (default: the copies bundled with the package).
    """

    def __init__(self, jobs: int = 1, models_dir: str | None = None, log=None):
        self.jobs = jobs
        self.models_dir = models_dir
        self._log = log or (lambda msg: None)

    def _model(self, name: str) -> Mlp:
        if self.models_dir is not None:
            return load_model(f"{self.models_dir}/{name}.json")
        return bundled_model(name)

    @cached_property
    def l63_reference_net(self) -> Mlp:
        return self._model("lorenz63_4n40")

    @cached_property
    def henon_reference_net(self) -> Mlp:
        return self._model("henon_2n20")

    @cached_property
    def l63(self) -> Lorenz63Map:
        return Lorenz63Map()

    @cached_property
    def henon(self) -> HenonMap:
        return HenonMap()

    @cached_property
    def l63_pool(self):
        self._log("building Lorenz-63 pool (1000 x 500 pairs) ...")
        return generate_pool(self.l63, 1000, 2500, 2000,
                             [(-20, 20), (-20, 20), (0, 50)], L63_POOL_SEED, jobs=self.jobs)

    @cached_property
    def henon_pool(self):
        self._log("building Henon pool (1000 x 500 pairs) ...")
        return generate_pool(self.henon, 1000, 2500, 2000,
                             [(-0.5, 0.5), (-0.5, 0.5)], HENON_POOL_SEED, jobs=self.jobs)

    @cached_property
    def l63_cloud(self) -> np.ndarray:
        return attractor_cloud(self.l63_pool)

    @cached_property
    def l63_cloud_100k(self) -> np.ndarray:
        idx = stream(SUBSAMPLE_SEED, 0).choice(self.l63_cloud.shape[0], 100_000, replace=False)
        return self.l63_cloud[np.sort(idx)]

    @cached_property
    def henon_cloud_100k(self) -> np.ndarray:
        cloud = attractor_cloud(self.henon_pool)
        idx = stream(SUBSAMPLE_SEED, 1).choice(cloud.shape[0], 100_000, replace=False)
        return cloud[np.sort(idx)]

    @cached_property
    def l63_tree(self) -> cKDTree:
        return cKDTree(self.l63_cloud_100k)

    @cached_property
    def henon_tree(self) -> cKDTree:
        return cKDTree(self.henon_cloud_100k)

    @cached_property
    def c3_val(self):
        return sample_pairs(self.l63_pool, 5000, seed=C3_VAL_SEED)

    @cached_property
    def c3_runs(self) -> list:
        """Five independently seeded 4-neuron training runs with orbit scores."""
        runs = []
        start = self.l63_cloud_100k[0]
        for s in range(N_SEEDS):
            self._log(f"criterion 3: training seed {s} ...")
            data = sample_pairs(self.l63_pool, 40, seed=C3_DATA_SEED + s)
            net, report = train([3, 4, 3], "tanh", data,
                                TrainConfig(seed=C3_TRAIN_SEED + s), val=self.c3_val,
                                map_id="lorenz63")
            check = orbit_check(net, start, 2000, BOX_L63, self.l63_tree)
            runs.append({"seed": s, "net": net, "report": report, "orbit": check})
        return runs

    @cached_property
    def c3_winner(self):
        """Best orbit-passing criterion-3 net with a stable emulator cloud.

        Passing nets are tried in ascending validation error; a net whose
        long-run attractor cannot be harvested (pool generation keeps
        diverging) is skipped, since criteria 4-5 need that cloud.
        """
        passers = [r for r in self.c3_runs if r["orbit"].ok]
        for run in sorted(passers, key=lambda r: r["report"].val_e_data):
            try:
                cloud_pool = emulator_cloud_pool(run["net"], "lorenz63",
                                                 C4_CLOUD_SEED, jobs=self.jobs)
            except (DivergenceError, RuntimeError):
                continue
            return run, cloud_pool
        return None, None

    @cached_property
    def ftle_comparison(self):
        run, cloud_pool = self.c3_winner
        if run is None:
            return None
        self._log("criteria 4-5: probing 2000 paired starts to N_t=500 ...")
        return ftle_compare(self.l63, run["net"], self.l63_pool, n=2000,
                            nt_list=[50, 500], seed=C4_PAIR_SEED,
                            cloud_pool=cloud_pool, jobs=self.jobs)


def criterion_1(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    triple = svd_wstar(assets.l63_reference_net)
    expected = np.array([2.7988, 1.2134, 0.6438, 0.0])
    count = stretch_count(triple.s)
    runtime = time.perf_counter() - t0
    passed = bool(np.all(np.abs(triple.s - expected) < 1e-3)) and count == 2 and runtime < 1.0
    return CriterionResult(1, "reference-net singular values", passed, {
        "singular_values": [round(v, 6) for v in triple.s],
        "expected": expected.tolist(), "stretch_count": count,
    }, runtime)


def criterion_2(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    triple = svd_wstar(assets.henon_reference_net)
    cv = classify_orthogonal_2d(triple.v.T)
    cu = classify_orthogonal_2d(triple.u)
    rot_err = min(abs(cv.angle_degrees - 130.0), abs(cv.alternate_angle_degrees - 130.0))
    axis_err = min(abs(cu.angle_degrees - 69.0), abs(cu.alternate_angle_degrees - 69.0))
    runtime = time.perf_counter() - t0
    passed = (cv.kind == "rotation" and rot_err <= 0.5
              and cu.kind == "reflection" and axis_err <= 0.5
              and abs(cu.determinant + 1.0) < 1e-10 and runtime < 1.0)
    return CriterionResult(2, "reference-net rotation/reflection angles", passed, {
        "v_kind": cv.kind, "v_angle": round(cv.angle_degrees, 4),
        "u_kind": cu.kind, "u_axis": round(cu.angle_degrees, 4),
        "det_u": round(cu.determinant, 12),
    }, runtime)


def criterion_3(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    per_seed = []
    for run in assets.c3_runs:
        check = run["orbit"]
        per_seed.append({
            "seed": run["seed"], "bounded": check.bounded, "in_box": check.in_box,
            "mean_nn": None if math.isnan(check.mean_nn) else round(check.mean_nn, 4),
            "orbit_to_cloud": None if math.isnan(check.orbit_to_cloud) else round(check.orbit_to_cloud, 4),
            "cloud_to_orbit": None if math.isnan(check.cloud_to_orbit) else round(check.cloud_to_orbit, 4),
            "mean_nn_ok": check.mean_nn < 1.0,
            "val_e_data": round(run["report"].val_e_data, 6),
            "pass": check.ok and check.mean_nn < 1.0,
        })
    passed = any(r["pass"] for r in per_seed)
    return CriterionResult(3, "attractor reconstruction (4 neurons / 40 pairs)",
                           passed, {"per_seed": per_seed},
                           time.perf_counter() - t0)


def criterion_4(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    comp = assets.ftle_comparison
    if comp is None:
        return CriterionResult(4, "short-horizon FTLE match (N_t=50)", False,
                               {"error": "no reconstruction net available from criterion 3"},
                               time.perf_counter() - t0)
    rms = comp.rms_error[50]
    return CriterionResult(4, "short-horizon FTLE match (N_t=50)", bool(rms < 0.04), {
        "rms_error": round(rms, 4), "threshold": 0.04,
        "dropped": comp.dropped[50],
        "pair_distance_mean": round(comp.meta["pair_distance_mean"], 4),
    }, time.perf_counter() - t0)


def criterion_5(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    comp = assets.ftle_comparison
    if comp is None:
        return CriterionResult(5, "long-horizon FTLE collapse (N_t=500)", False,
                               {"error": "no reconstruction net available from criterion 3"},
                               time.perf_counter() - t0)
    lam_t = comp.lam_truth[500]
    lam_n = comp.lam_net[500]
    valid = np.isfinite(lam_t) & np.isfinite(lam_n)
    lam_t, lam_n = lam_t[valid], lam_n[valid]
    frac_t = float(np.mean((lam_t >= 0.7) & (lam_t <= 1.1)))
    frac_n = float(np.mean((lam_n >= 0.7) & (lam_n <= 1.1)))
    med_t = float(np.median(lam_t))
    med_n = float(np.median(lam_n))
    passed = (frac_t >= 0.9 and frac_n >= 0.9
              and abs(med_t - 0.91) <= 0.1 and abs(med_n - 0.91) <= 0.1)
    return CriterionResult(5, "long-horizon FTLE collapse (N_t=500)", passed, {
        "fraction_truth_in_band": round(frac_t, 4), "fraction_net_in_band": round(frac_n, 4),
        "median_truth": round(med_t, 4), "median_net": round(med_n, 4),
        "band": [0.7, 1.1], "median_target": [0.81, 1.01],
    }, time.perf_counter() - t0)


def criterion_6(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    region = RegionFilter.parse("x>-5", 3)
    fraction = float(region.mask(assets.l63_pool.inputs).mean())
    fraction_ok = abs(fraction - 0.73) <= 0.03
    starts = assets.l63_cloud_100k
    start = starts[starts[:, 0] < -5.0][0]
    per_seed = []
    for s in range(N_SEEDS):
        data = sample_pairs(assets.l63_pool, 100, region=region, seed=C6_DATA_SEED + s)
        net, report = train([3, 5, 3], "tanh", data,
                            TrainConfig(seed=C6_TRAIN_SEED + s), val=assets.c3_val,
                            map_id="lorenz63")
        check = orbit_check(net, start, 2000, BOX_L63)
        per_seed.append({"seed": s, "bounded": check.bounded, "in_box": check.in_box,
                         "pass": check.ok})
    passed = fraction_ok and any(r["pass"] for r in per_seed)
    return CriterionResult(6, "extrapolation from unseen region (X < -5 start)", passed, {
        "filtered_fraction": round(fraction, 4), "fraction_ok": fraction_ok,
        "start": [round(v, 3) for v in start], "per_seed": per_seed,
    }, time.perf_counter() - t0)


def criterion_7(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    start = assets.henon_cloud_100k[0]
    per_seed = []
    for s in range(N_SEEDS):
        data = sample_pairs(assets.henon_pool, 20, seed=C7_DATA_SEED + s)
        net, report = train([2, 2, 2], "tanh", data,
                            TrainConfig(seed=C7_TRAIN_SEED + s), map_id="henon")
        check = orbit_check(net, start, 10_000, None, assets.henon_tree)
        per_seed.append({
            "seed": s, "bounded": check.bounded,
            "mean_nn": None if math.isnan(check.mean_nn) else round(check.mean_nn, 5),
            "orbit_to_cloud": None if math.isnan(check.orbit_to_cloud) else round(check.orbit_to_cloud, 5),
            "cloud_to_orbit": None if math.isnan(check.cloud_to_orbit) else round(check.cloud_to_orbit, 5),
            "pass": check.bounded and check.mean_nn < 0.05,
        })
    passed = any(r["pass"] for r in per_seed)
    return CriterionResult(7, "2-neuron Henon emulation", passed,
                           {"per_seed": per_seed}, time.perf_counter() - t0)


def criterion_8(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    a1 = bounds_mod.andoni_bound(3, 2, 1.0).value
    a2 = bounds_mod.andoni_bound(2, 2, 1.0).value
    p = bounds_mod.polynet_bound(3, 2).value_ceil
    tc = bounds_mod.taylor_count_bound(3).value_ceil
    poly = bounds_mod.nn_poly_error(assets.l63_reference_net, assets.l63, assets.l63_cloud,
                                    n_samples=5000, seed=C8_POLY_SEED)
    passed = (a1 == 531441 and a2 == 4096 and p == 6 and tc == 9
              and 0.10 <= poly.epsilon <= 0.20)
    return CriterionResult(8, "neuron-count bounds + cubic-expansion error", passed, {
        "andoni_3": a1, "andoni_2": a2, "polynet": p, "taylor_count": tc,
        "poly_epsilon": round(poly.epsilon, 4), "poly_raw_rms": round(poly.raw_rms, 4),
        "epsilon_band": [0.10, 0.20],
    }, time.perf_counter() - t0)


def _qr_lyapunov_batch(henon: HenonMap, starts: np.ndarray, n_steps: int) -> np.ndarray:
    """Independent long-run exponent: QR on analytic one-step Jacobians."""
    x = starts.copy()
    m = x.shape[0]
    a, b = henon.params.a, henon.params.b
    q = np.broadcast_to(np.eye(2), (m, 2, 2)).copy()
    jacs = np.zeros((m, 2, 2))
    jacs[:, 0, 1] = 1.0
    jacs[:, 1, 0] = b
    total = np.zeros(m)
    for _ in range(n_steps):
        jacs[:, 0, 0] = -2.0 * a * x[:, 0]
        q, r = np.linalg.qr(jacs @ q)
        total += np.log(np.abs(r[:, 0, 0]))
        henon.advance_block(x, 1)
    return total / n_steps


def criterion_9(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    rng = stream(C9_SEED, 0)
    details = {}

    # (a) analytic vs central-FD Jacobian on the reference net
    net = assets.l63_reference_net
    worst = 0.0
    h = 1e-6
    eye = np.eye(3)
    for x in rng.uniform(-20, 20, size=(100, 3)):
        jac = jacobian(net, x)
        fd = np.column_stack([(forward(net, x + h * e) - forward(net, x - h * e)) / (2 * h)
                              for e in eye])
        worst = max(worst, float(np.max(np.abs(jac - fd)) / np.max(np.abs(jac))))
    details["jacobian_fd_rel"] = worst
    ok_a = worst < 1e-6

    # (b) squared-norm identity |dy'|^2 = |G U S V' dy|^2 (relative)
    worst_b = 0.0
    for check_net in (assets.l63_reference_net, assets.henon_reference_net):
        pair_w = check_net.layers[0].weights @ check_net.layers[1].weights
        pair_b = check_net.layers[0].weights @ check_net.layers[1].bias + check_net.layers[0].bias
        triple = svd_wstar(check_net)
        L = pair_w.shape[0]
        for _ in range(100):
            y = rng.uniform(-1, 1, size=L)
            dy = rng.normal(size=L)
            lhs = float(np.sum(perturbation_growth(check_net, y, dy) ** 2))
            g = check_net.activation.deriv(pair_w @ y + pair_b)
            rhs = float(np.sum((g * (triple.u @ (triple.s * (triple.v.T @ dy)))) ** 2))
            worst_b = max(worst_b, abs(lhs - rhs) / max(lhs, rhs, 1e-300))
    details["norm_identity_rel"] = worst_b
    ok_b = worst_b < 1e-10

    # (c) neuron-map/phase-map homomorphism, scale-aware error
    worst_c = 0.0
    for check_net in (assets.l63_reference_net, assets.henon_reference_net):
        L = check_net.layers[0].weights.shape[0]
        for _ in range(100):
            y = rng.uniform(-1, 1, size=L)
            a = decode(check_net, neuron_step(check_net, y))
            b = forward(check_net, decode(check_net, y))
            worst_c = max(worst_c, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))))
    details["homomorphism_err"] = worst_c
    ok_c = worst_c < 1e-12

    # (d) Henon FD Jacobian vs analytic chain product at N_t=5
    worst_d = 0.0
    henon = assets.henon
    for x in assets.henon_cloud_100k[:20]:
        fd = fd_jacobian(henon, x, 5)
        chain = np.eye(2)
        xi = x.copy()
        for _ in range(5):
            chain = henon.jacobian(xi) @ chain
            xi = henon.apply(xi)
        worst_d = max(worst_d, float(np.max(np.abs(fd - chain)) / np.max(np.abs(chain))))
    details["henon_chain_rel"] = worst_d
    ok_d = worst_d < 1e-4

    # (e) Henon long-run exponent, FD tangent propagation vs QR oracle
    starts = assets.henon_cloud_100k[:: len(assets.henon_cloud_100k) // 100][:100]
    lam_fd = float(np.mean(long_run_lyapunov_batch(henon, starts, 10_000)))
    lam_qr = float(np.mean(_qr_lyapunov_batch(henon, starts, 10_000)))
    details["henon_lyapunov_fd"] = lam_fd
    details["henon_lyapunov_qr"] = lam_qr
    ok_e = abs(lam_fd - 0.419) <= 0.01 and abs(lam_qr - 0.419) <= 0.01

    # (f) one-step volume contraction of the flow map
    p = assets.l63.params
    expected = math.exp(-(p.sigma + 1 + p.beta) * p.dt)
    worst_f = 0.0
    for x in assets.l63_cloud_100k[:20]:
        det = float(np.linalg.det(fd_jacobian(assets.l63, x, 1)))
        worst_f = max(worst_f, abs(det - expected) / expected)
    details["det_rel_err"] = worst_f
    ok_f = worst_f < 1e-3

    passed = ok_a and ok_b and ok_c and ok_d and ok_e and ok_f
    details = {k: (float(f"{v:.4g}") if isinstance(v, float) and v == v else v)
               for k, v in details.items()}
    details["checks"] = {"jacobian": ok_a, "norm_identity": ok_b, "homomorphism": ok_c,
                         "henon_chain": ok_d, "henon_lyapunov": ok_e, "l63_det": ok_f}
    return CriterionResult(9, "exact-linearization property suite", passed, details,
                           time.perf_counter() - t0)


def criterion_10(assets: AcceptanceAssets) -> CriterionResult:
    t0 = time.perf_counter()
    assets._log("criterion 10: sweeping relu/linear grid (72 cells) ...")
    cells = sweep(assets.l63_pool, SWEEP_NEURONS, SWEEP_NDATA, ("relu", "linear"),
                  (C10_SWEEP_SEED,), test_size=2000, jobs=assets.jobs, keep_nets=True)
    start = assets.l63_cloud_100k[0]
    reconstructions = []
    linear_net = None
    for cell in cells:
        if cell.net is None:
            reconstructions.append({"neurons": cell.neurons, "n_data": cell.n_data,
                                    "activation": cell.activation, "pass": False,
                                    "error": cell.error})
            continue
        if cell.activation == "linear" and linear_net is None:
            linear_net = cell.net
        check = orbit_check(cell.net, start, 2000, BOX_L63, assets.l63_tree)
        reconstructions.append({
            "neurons": cell.neurons, "n_data": cell.n_data, "activation": cell.activation,
            "rms": None if cell.rms != cell.rms else round(cell.rms, 4),
            "mean_nn": None if math.isnan(check.mean_nn) else round(check.mean_nn, 3),
            "pass": check.ok and check.mean_nn < 1.0,
        })
    n_passing = sum(r["pass"] for r in reconstructions)
    all_fail = n_passing == 0

    jac_variation = float("nan")
    if linear_net is not None:
        pts = stream(C9_SEED, 1).uniform(-20, 20, size=(50, 3))
        jacs = np.array([jacobian(linear_net, x) for x in pts])
        jac_variation = float(np.max(np.abs(jacs - jacs[0])))
    jac_ok = jac_variation < 1e-12

    return CriterionResult(10, "negative control (relu/linear must fail)",
                           all_fail and jac_ok, {
                               "cells": len(cells), "cells_passing_reconstruction": n_passing,
                               "passing_cells": [r for r in reconstructions if r["pass"]],
                               "linear_jacobian_variation": jac_variation,
                           }, time.perf_counter() - t0)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10,
}


def run_criteria(indices=None, jobs: int = 1, models_dir: str | None = None,
                 log=None, assets: AcceptanceAssets | None = None) -> list:
    """Run the selected checks (all by default) against shared assets."""
    indices = sorted(indices) if indices else sorted(CRITERIA)
    unknown = [i for i in indices if i not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}; valid: 1-10")
    if assets is None:
        assets = AcceptanceAssets(jobs=jobs, models_dir=models_dir, log=log)
    results = []
    for i in indices:
        result = CRITERIA[i](assets)
        if log:
            log(result.line())
        results.append(result)
    return results
