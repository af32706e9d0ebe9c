"""Command-line front end: data generation, training, analysis, checks.

Every subcommand resolves its settings in three layers — built-in defaults,
then an optional TOML config file (``--config``), then explicit flags — and
later layers win.  The effective configuration is echoed to
``manifest.json`` in the output directory, and a manifest can be passed
straight back to ``--config`` to replay the run.

A config file may either hold the keys for one command at its top level or
group several commands into tables (``[train]``, ``[sweep]`` ...); only the
table matching the invoked command is read.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(divergence or singular linear algebra), 4 failed checks under ``check``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .acceptance import run_criteria
from .activations import ACTIVATIONS
from .bounds import bounds_table, nn_poly_error
from .dataset import (DEFAULT_INIT_BOX, InsufficientPairsError,
                      PoolDivergenceError, RegionFilter, attractor_cloud,
                      default_pool, generate_pool, load_pool, sample_pairs,
                      save_pool)
from .dynamics import MAPS, DivergenceError, make_map
from .ftle import ftle_compare, write_scatter
from .geometry import (classify_orthogonal_2d, compression_certificate,
                       principal_angles, stretch_count, svd_wstar,
                       trace_substeps, write_substeps)
from .network import MlpMap, bundled_model, load_model, save_model
from .svg import write_polyline_svg, write_scatter_svg
from .training import (TrainConfig, TrainingDivergedError, rms_error, sweep,
                       train)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CHECK = 4

# interior points whose 2000-step burn-in lands on the attractor; used when
# a command needs an on-attractor start and none was given
BURN_IN_START = {"lorenz63": (1.0, 1.0, 20.0), "henon": (0.1, 0.1)}
BURN_IN_STEPS = 2000


class ConfigError(Exception):
    """Bad flag/config value; reported on stderr and mapped to exit 2."""


DEFAULTS = {
    "gen-data": {
        "map": "lorenz63", "n_traj": 1000, "n_steps": 2500, "n_discard": 2000,
        "init_box": None, "seed": 0, "out": "runs/gen-data", "jobs": 1,
    },
    "train": {
        "map": "lorenz63", "pool": None, "pool_seed": 0, "n_traj": None,
        "neurons": 4, "n_data": 40, "activation": "tanh", "region": None,
        "data_seed": 0, "val_size": 1000, "test_size": 2000,
        "epochs": 1000, "restarts": 5, "bayes": True, "seed": 0,
        "out": "runs/train", "jobs": 1,
    },
    "trajectory": {
        "model": None, "map": None, "start": None, "n_steps": 2000,
        "out": "runs/trajectory",
    },
    "ftle": {
        "model": None, "map": None, "pool": None, "pool_seed": 0,
        "n_traj": None, "n": 2000, "nt": (50, 500), "eps": 1e-9, "seed": 0,
        "out": "runs/ftle", "jobs": 1,
    },
    "geometry": {
        "model": None, "samples": 500, "trace_points": 200, "threshold": 1.0,
        "out": "runs/geometry",
    },
    "bounds": {
        "neurons": 3, "dim": 2, "eps": 1.0, "model": None, "pool": None,
        "pool_seed": 0, "n_traj": None, "n_samples": 5000, "seed": 0,
        "out": None, "jobs": 1,
    },
    "sweep": {
        "map": "lorenz63", "pool": None, "pool_seed": 0, "n_traj": None,
        "neurons": (3, 4, 5, 6, 7, 8), "n_data": (20, 30, 40, 60, 100, 150),
        "activations": ("tanh",), "seeds": (0,), "region": None,
        "epochs": 1000, "restarts": 5, "test_size": 5000,
        "ftle_pairs": 0, "ftle_nt": 50, "out": "runs/sweep", "jobs": 1,
    },
    "check": {
        "criteria": None, "models_dir": None, "out": None, "jobs": 1,
    },
}


# ---------------------------------------------------------------------------
# value coercion


def _as_list(value, cast):
    """Accept a TOML array or a comma/space-separated flag string."""
    if isinstance(value, str):
        parts = [p for p in value.replace(",", " ").split() if p]
        return [cast(p) for p in parts]
    if isinstance(value, (list, tuple)):
        return [cast(p) for p in value]
    return [cast(value)]


def _as_box(value, dim):
    """Init box from ``"lo:hi,lo:hi,..."`` or a TOML ``[[lo, hi], ...]``."""
    if isinstance(value, str):
        pairs = []
        for part in value.split(","):
            lo, sep, hi = part.partition(":")
            if not sep:
                raise ConfigError(f"bad box interval {part!r}; expected lo:hi")
            pairs.append((float(lo), float(hi)))
    else:
        try:
            pairs = [(float(lo), float(hi)) for lo, hi in value]
        except (TypeError, ValueError):
            raise ConfigError(f"bad init box {value!r}") from None
    if len(pairs) != dim:
        raise ConfigError(f"init box has {len(pairs)} intervals, map needs {dim}")
    return pairs


def _check_map(name):
    if name not in MAPS:
        raise ConfigError(f"unknown map {name!r}; choose from {sorted(MAPS)}")
    return name


def _check_activation(name):
    if name not in ACTIVATIONS:
        raise ConfigError(f"unknown activation {name!r}; choose from {sorted(ACTIVATIONS)}")
    return name


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return float(obj)
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def _write_json(path, doc):
    with open(str(path), "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _ensure_out(values):
    out = values.get("out")
    if not out:
        raise ConfigError("an output directory is required (--out)")
    os.makedirs(out, exist_ok=True)
    return out


def _write_manifest(out_dir, command, values, extra=None):
    doc = {"command": command, "package_version": __version__,
           "config": values}
    if extra:
        doc.update(extra)
    _write_json(os.path.join(out_dir, "manifest.json"), doc)


# ---------------------------------------------------------------------------
# config-file layering


def _load_config(path, command):
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        if path.endswith(".json"):
            with open(path) as fh:
                doc = json.load(fh)
        else:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as err:
        raise ConfigError(f"cannot parse config {path}: {err}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} is not a table")
    if "command" in doc and "config" in doc:  # a replayed run manifest
        if doc["command"] != command:
            raise ConfigError(
                f"manifest {path} records a {doc['command']!r} run, not {command!r}")
        return dict(doc["config"])
    if command in doc and isinstance(doc[command], dict):
        return dict(doc[command])
    # flat file: ignore tables that belong to other commands
    return {k: v for k, v in doc.items()
            if not (isinstance(v, dict) and k in DEFAULTS)}


def _resolve(command, args):
    """defaults <- config file <- explicit flags."""
    values = dict(DEFAULTS[command])
    ns = dict(vars(args))
    ns.pop("command", None)
    cfg_path = ns.pop("config", None)
    if cfg_path:
        for key, val in _load_config(cfg_path, command).items():
            k = key.replace("-", "_")
            if k not in values:
                raise ConfigError(f"unknown config key {key!r} for {command}")
            values[k] = val
    values.update(ns)  # argparse defaults are suppressed: only explicit flags
    return values


# ---------------------------------------------------------------------------
# shared asset loading


def _load_net(spec):
    if spec is None:
        raise ConfigError("a model file (or bundled model name) is required (--model)")
    if os.path.isfile(str(spec)):
        return load_model(spec)
    try:
        return bundled_model(str(spec))
    except (FileNotFoundError, OSError):
        raise ConfigError(
            f"model {spec!r} is neither a file nor a bundled model name") from None


def _resolve_pool(values, map_id, jobs):
    """Load the pool file if one was given, else build the default pool."""
    if values.get("pool"):
        path = str(values["pool"])
        if not os.path.isfile(path):
            raise ConfigError(f"pool file not found: {path}")
        pool = load_pool(path)
        if map_id is not None and pool.map_id != map_id:
            raise ConfigError(
                f"pool {path} holds {pool.map_id!r} data, expected {map_id!r}")
        return pool
    if map_id is None:
        raise ConfigError("no pool file given and no map known; pass --pool or --map")
    overrides = {}
    if values.get("n_traj"):
        overrides["n_traj"] = int(values["n_traj"])
    return default_pool(map_id, int(values.get("pool_seed", 0)), jobs=jobs,
                        **overrides)


def _burn_in_start(map_obj):
    return map_obj.iterate(np.array(BURN_IN_START[map_obj.map_id]),
                           BURN_IN_STEPS)[-1]


def _axis_names(dim):
    return ["x", "y", "z"][:dim]


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen_data(values):
    map_id = _check_map(values["map"])
    map_obj = make_map(map_id)
    box = (_as_box(values["init_box"], map_obj.dim) if values["init_box"]
           else DEFAULT_INIT_BOX[map_id])
    out = _ensure_out(values)
    pool = generate_pool(map_obj, int(values["n_traj"]), int(values["n_steps"]),
                         int(values["n_discard"]), box, int(values["seed"]),
                         jobs=int(values["jobs"]))
    csv_path = os.path.join(out, "pool.csv")
    save_pool(pool, csv_path)
    values["init_box"] = [[float(lo), float(hi)] for lo, hi in box]
    _write_manifest(out, "gen-data", values, {"n_pairs": len(pool),
                                              "retries": pool.retries})
    print(f"wrote {len(pool)} {map_id} pairs to {csv_path}")
    return EXIT_OK


def cmd_train(values):
    jobs = int(values["jobs"])
    pool = _resolve_pool(values, _check_map(values["map"]), jobs)
    region = None
    if values["region"]:
        try:
            region = RegionFilter.parse(str(values["region"]), pool.dim)
        except ValueError as err:
            raise ConfigError(str(err)) from None
    _check_activation(values["activation"])
    data_seed = int(values["data_seed"])
    data = sample_pairs(pool, int(values["n_data"]), region, data_seed)
    val = None
    if int(values["val_size"]) > 0:
        val = sample_pairs(pool, int(values["val_size"]), region, data_seed + 1)
    try:
        cfg = TrainConfig(epochs=int(values["epochs"]),
                          restarts=int(values["restarts"]),
                          bayes=bool(values["bayes"]), seed=int(values["seed"]))
    except ValueError as err:
        raise ConfigError(str(err)) from None
    dims = [pool.dim, int(values["neurons"]), pool.dim]
    net, report = train(dims, values["activation"], data, cfg, val,
                        map_id=pool.map_id)
    out = _ensure_out(values)
    model_path = os.path.join(out, "model.json")
    save_model(net, model_path)
    doc = {"e_data": report.e_data, "e_weights": report.e_weights,
           "alpha": report.alpha, "beta": report.beta, "gamma": report.gamma,
           "val_e_data": report.val_e_data, "restart_index": report.restart_index,
           "n_params": report.n_params, "epochs_run": report.epochs_run}
    if int(values["test_size"]) > 0:
        test = sample_pairs(pool, int(values["test_size"]), None, data_seed + 2)
        doc["test_rms"] = rms_error(net, test)
    _write_json(os.path.join(out, "report.json"), doc)
    _write_manifest(out, "train", values)
    rms_note = f"  test rms {doc['test_rms']:.4f}" if "test_rms" in doc else ""
    print(f"trained {dims} {values['activation']} net: E_D {report.e_data:.4g}, "
          f"gamma {report.gamma:.1f}/{report.n_params}{rms_note}")
    print(f"model saved to {model_path}")
    return EXIT_OK


def cmd_trajectory(values):
    net = _load_net(values["model"])
    map_id = values["map"] or net.map_id
    if map_id is None:
        raise ConfigError("model carries no map id; pass --map")
    truth = make_map(_check_map(map_id))
    if truth.dim != net.n_in:
        raise ConfigError(f"model is {net.n_in}-dimensional, map {map_id} is {truth.dim}")
    if values["start"] is not None:
        start = np.array(_as_list(values["start"], float))
        if start.shape[0] != truth.dim:
            raise ConfigError(f"start needs {truth.dim} coordinates")
    else:
        start = _burn_in_start(truth)
    n = int(values["n_steps"])
    truth_traj = truth.iterate(start, n)

    net_map = MlpMap(net)
    emu = np.full((n + 1, truth.dim), np.nan)
    emu[0] = start
    diverged_at = None
    x = start
    for k in range(1, n + 1):
        x = net_map.apply(x)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > net_map.guard:
            diverged_at = k
            break
        emu[k] = x

    out = _ensure_out(values)
    axes = _axis_names(truth.dim)
    csv_path = os.path.join(out, "trajectory.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step"] + [f"truth_{a}" for a in axes]
                        + [f"emulator_{a}" for a in axes])
        for k in range(n + 1):
            writer.writerow([k] + [f"{v:.17g}" for v in truth_traj[k]]
                            + [f"{v:.17g}" for v in emu[k]])
    # butterfly-style projection: first axis against last
    proj = (0, truth.dim - 1)
    emu_ok = emu[: diverged_at if diverged_at is not None else n + 1]
    write_polyline_svg(os.path.join(out, "trajectory.svg"),
                       [truth_traj[:, proj], emu_ok[:, proj]],
                       labels=["truth", "emulator"],
                       title=f"{map_id}: truth vs emulator, {n} steps")
    _write_manifest(out, "trajectory", dict(values, start=[float(v) for v in start]),
                    {"diverged_at": diverged_at})
    state = f"diverged at step {diverged_at}" if diverged_at else "bounded"
    print(f"{n}-step trajectory pair written to {csv_path} (emulator {state})")
    # emulator divergence is a reported result here, not a failure
    return EXIT_OK


def cmd_ftle(values):
    jobs = int(values["jobs"])
    net = _load_net(values["model"]) if values["model"] else None
    map_id = values["map"] or (net.map_id if net is not None else None)
    if map_id is not None:
        _check_map(map_id)
    pool = _resolve_pool(values, map_id, jobs)
    nt_list = _as_list(values["nt"], int)
    comp = ftle_compare(None, net, pool, n=int(values["n"]), nt_list=nt_list,
                        eps=float(values["eps"]), seed=int(values["seed"]),
                        jobs=jobs)
    out = _ensure_out(values)
    csv_path = os.path.join(out, "ftle_scatter.csv")
    write_scatter(comp, csv_path)
    point_sets, labels = [], []
    for nt in comp.nt_list:
        lt, ln = comp.lam_truth[nt], comp.lam_net[nt]
        valid = np.isfinite(lt) & np.isfinite(ln)
        point_sets.append(np.column_stack([lt[valid], ln[valid]]))
        labels.append(f"Nt={nt}")
    write_scatter_svg(os.path.join(out, "ftle_scatter.svg"), point_sets, labels,
                      title="FTLE: truth (x) vs emulator (y)")
    _write_manifest(out, "ftle", values, {"rms_error": comp.rms_error,
                                          "dropped": comp.dropped})
    for nt in comp.nt_list:
        print(f"Nt={nt:4d}  rms error {comp.rms_error[nt]:.4f}  "
              f"dropped {comp.dropped[nt]}/{int(values['n'])}")
    print(f"scatter written to {csv_path}")
    return EXIT_OK


def cmd_geometry(values):
    net = _load_net(values["model"])
    if not net.single_hidden:
        raise ConfigError("geometry decomposition needs a single-hidden-layer model")
    trip = svd_wstar(net)
    threshold = float(values["threshold"])
    report = {
        "singular_values": trip.s,
        "stretch_count": stretch_count(trip.s, threshold),
        "stretch_threshold": threshold,
        "det_u": float(np.linalg.det(trip.u)),
        "det_v": float(np.linalg.det(trip.v)),
    }
    headline = [f"singular values {np.round(trip.s, 4).tolist()}",
                f"stretch count {report['stretch_count']}"]
    if trip.s.shape[0] == 2:
        for key, q in (("v_transpose", trip.v.T), ("u", trip.u)):
            c = classify_orthogonal_2d(q)
            report[key] = {"kind": c.kind, "angle_degrees": c.angle_degrees,
                           "alternate_angle_degrees": c.alternate_angle_degrees,
                           "determinant": c.determinant}
            headline.append(f"{key} {c.kind} {c.angle_degrees:.4f} deg")
    else:
        for key, q in (("v_transpose", trip.v.T), ("u", trip.u)):
            angles, det = principal_angles(q)
            report[key] = {"principal_angles_degrees": list(angles),
                           "determinant": det}

    if net.map_id in MAPS:
        truth = make_map(net.map_id)
        pts = truth.iterate(_burn_in_start(truth), int(values["samples"]))
    else:
        # no reference map: probe a unit cube around the origin
        pts = np.random.default_rng(0).uniform(-1, 1, size=(int(values["samples"]), net.n_in))
    cert = compression_certificate(net, pts)
    report["compression"] = {"max_derivative": cert.max_deriv,
                             "certified": cert.certified,
                             "n_samples": cert.n_samples}
    out = _ensure_out(values)
    trace = trace_substeps(net, pts[: int(values["trace_points"])])
    write_substeps(trace, os.path.join(out, "substeps.csv"))
    _write_json(os.path.join(out, "geometry.json"), report)
    _write_manifest(out, "geometry", values)
    headline.append(f"compression certified: {cert.certified}")
    print("; ".join(headline))
    print(f"report written to {out}/geometry.json")
    return EXIT_OK


def cmd_bounds(values):
    n, d, eps = int(values["neurons"]), int(values["dim"]), float(values["eps"])
    if n < 1 or d < 1 or eps <= 0:
        raise ConfigError("bounds need neurons >= 1, dim >= 1, eps > 0")
    rows = bounds_table(n, d, eps)
    print(f"{'bound':<14} {'value':>12} {'ceil':>6}  inputs")
    for b in rows:
        ceil = "" if b.value_ceil is None else str(b.value_ceil)
        print(f"{b.name:<14} {float(b.value):>12.6g} {ceil:>6}  {b.inputs}")
    doc = {"bounds": [{"name": b.name, "inputs": b.inputs, "value": float(b.value),
                       "value_ceil": b.value_ceil, "notes": b.notes} for b in rows]}
    if values["model"]:
        net = _load_net(values["model"])
        map_id = values.get("map") or net.map_id
        if map_id is None:
            raise ConfigError("model carries no map id; cannot score nn_poly_error")
        pool = _resolve_pool(values, _check_map(map_id), int(values["jobs"]))
        rep = nn_poly_error(net, make_map(map_id), attractor_cloud(pool),
                            n_samples=int(values["n_samples"]),
                            seed=int(values["seed"]))
        doc["nn_poly_error"] = {"epsilon": rep.epsilon, "raw_rms": rep.raw_rms,
                                "n_samples": rep.n_samples, "seed": rep.seed}
        print(f"cubic-expansion error of {values['model']}: epsilon {rep.epsilon:.4f} "
              f"(raw rms {rep.raw_rms:.4f}, {rep.n_samples} samples)")
    if values["out"]:
        out = _ensure_out(values)
        _write_json(os.path.join(out, "bounds.json"), doc)
        _write_manifest(out, "bounds", values)
    return EXIT_OK


def cmd_sweep(values):
    jobs = int(values["jobs"])
    pool = _resolve_pool(values, _check_map(values["map"]), jobs)
    region = None
    if values["region"]:
        try:
            region = RegionFilter.parse(str(values["region"]), pool.dim)
        except ValueError as err:
            raise ConfigError(str(err)) from None
    activations = [_check_activation(a) for a in _as_list(values["activations"], str)]
    try:
        cfg = TrainConfig(epochs=int(values["epochs"]), restarts=int(values["restarts"]))
    except ValueError as err:
        raise ConfigError(str(err)) from None
    cells = sweep(pool,
                  _as_list(values["neurons"], int),
                  _as_list(values["n_data"], int),
                  activations,
                  _as_list(values["seeds"], int),
                  cfg,
                  test_size=int(values["test_size"]),
                  ftle_pairs=int(values["ftle_pairs"]),
                  ftle_nt=int(values["ftle_nt"]),
                  jobs=jobs, region=region)
    out = _ensure_out(values)
    csv_path = os.path.join(out, "sweep.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["neurons", "n_data", "activation", "seed", "rms", "ftle_rms"])
        for c in cells:
            writer.writerow([c.neurons, c.n_data, c.activation, c.seed,
                             f"{c.rms:.17g}", f"{c.ftle_rms:.17g}"])
    errors = [{"neurons": c.neurons, "n_data": c.n_data, "activation": c.activation,
               "seed": c.seed, "error": c.error} for c in cells if c.error]
    _write_manifest(out, "sweep", values, {"n_cells": len(cells),
                                           "cell_errors": errors})
    print(f"swept {len(cells)} cells ({len(errors)} failed); table in {csv_path}")
    return EXIT_OK


def cmd_check(values):
    indices = _as_list(values["criteria"], int) if values["criteria"] else None
    try:
        results = run_criteria(indices, jobs=int(values["jobs"]),
                               models_dir=values["models_dir"], log=print)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    n_pass = sum(r.passed for r in results)
    if values["out"]:
        out = _ensure_out(values)
        _write_json(os.path.join(out, "check.json"),
                    {"results": [{"index": r.index, "name": r.name,
                                  "passed": r.passed, "runtime_s": r.runtime_s,
                                  "details": r.details} for r in results]})
        _write_manifest(out, "check", values, {"passed": n_pass,
                                               "total": len(results)})
    print(f"{n_pass}/{len(results)} checks passed")
    return EXIT_OK if n_pass == len(results) else EXIT_CHECK


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "trajectory": cmd_trajectory,
    "ftle": cmd_ftle,
    "geometry": cmd_geometry,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "check": cmd_check,
}


# ---------------------------------------------------------------------------
# parser

S = argparse.SUPPRESS


def _add_common(p, jobs=True):
    p.add_argument("--config", default=S, metavar="FILE",
                   help="TOML config (or a manifest.json from a previous run)")
    p.add_argument("--out", default=S, metavar="DIR", help="output directory")
    if jobs:
        p.add_argument("--jobs", type=int, default=S, help="worker threads")


def _add_pool_source(p):
    p.add_argument("--pool", default=S, metavar="FILE",
                   help="pool CSV from gen-data (skips regeneration)")
    p.add_argument("--pool-seed", type=int, default=S,
                   help="seed when generating the pool in-process")
    p.add_argument("--n-traj", type=int, default=S,
                   help="trajectory count when generating in-process")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chaosnn",
        description="Train and dissect minimal neural emulators of chaotic maps.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("gen-data", help="generate a trajectory-pair pool")
    p.add_argument("--map", default=S, choices=sorted(MAPS))
    p.add_argument("--n-traj", type=int, default=S)
    p.add_argument("--n-steps", type=int, default=S)
    p.add_argument("--n-discard", type=int, default=S)
    p.add_argument("--init-box", default=S, metavar="LO:HI,...",
                   help="initial-condition box, one lo:hi interval per axis")
    p.add_argument("--seed", type=int, default=S)
    _add_common(p)

    p = sub.add_parser("train", help="train a single-hidden-layer emulator")
    p.add_argument("--map", default=S, choices=sorted(MAPS))
    _add_pool_source(p)
    p.add_argument("--neurons", type=int, default=S)
    p.add_argument("--n-data", type=int, default=S, help="training pairs")
    p.add_argument("--activation", default=S)
    p.add_argument("--region", default=S, metavar="EXPR",
                   help='training-input filter, e.g. "x>-5"')
    p.add_argument("--data-seed", type=int, default=S)
    p.add_argument("--val-size", type=int, default=S,
                   help="validation pairs for restart selection (0 disables)")
    p.add_argument("--test-size", type=int, default=S,
                   help="held-out pairs for the reported rms (0 disables)")
    p.add_argument("--epochs", type=int, default=S)
    p.add_argument("--restarts", type=int, default=S)
    p.add_argument("--bayes", action=argparse.BooleanOptionalAction, default=S,
                   help="Bayesian regularization (on by default)")
    p.add_argument("--seed", type=int, default=S, help="init seed")
    _add_common(p)

    p = sub.add_parser("trajectory", help="paired truth/emulator trajectory CSV")
    p.add_argument("--model", default=S, help="model file or bundled name")
    p.add_argument("--map", default=S, choices=sorted(MAPS),
                   help="override the model's map id")
    p.add_argument("--start", default=S, metavar="X,Y,...",
                   help="start point (default: on-attractor burn-in point)")
    p.add_argument("--n-steps", type=int, default=S)
    _add_common(p, jobs=False)

    p = sub.add_parser("ftle", help="paired finite-time Lyapunov comparison")
    p.add_argument("--model", default=S,
                   help="model file or bundled name (omit for a truth self-comparison)")
    p.add_argument("--map", default=S, choices=sorted(MAPS))
    _add_pool_source(p)
    p.add_argument("--n", type=int, default=S, help="paired starts")
    p.add_argument("--nt", default=S, metavar="N1,N2,...", help="horizons")
    p.add_argument("--eps", type=float, default=S, help="FD probe offset")
    p.add_argument("--seed", type=int, default=S)
    _add_common(p)

    p = sub.add_parser("geometry", help="rotation/stretch/compression decomposition")
    p.add_argument("--model", default=S, help="model file or bundled name")
    p.add_argument("--samples", type=int, default=S,
                   help="on-attractor points for the compression certificate")
    p.add_argument("--trace-points", type=int, default=S,
                   help="points carried through the sub-step trace CSV")
    p.add_argument("--threshold", type=float, default=S,
                   help="singular-value threshold for the stretch count")
    _add_common(p, jobs=False)

    p = sub.add_parser("bounds", help="neuron-count lower-bound table")
    p.add_argument("--neurons", type=int, default=S)
    p.add_argument("--dim", type=int, default=S, help="polynomial degree / dimension")
    p.add_argument("--eps", type=float, default=S, help="approximation error")
    p.add_argument("--model", default=S,
                   help="score this model's cubic-expansion error too")
    _add_pool_source(p)
    p.add_argument("--n-samples", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    _add_common(p)

    p = sub.add_parser("sweep", help="grid sweep over sizes/data/activations")
    p.add_argument("--map", default=S, choices=sorted(MAPS))
    _add_pool_source(p)
    p.add_argument("--neurons", default=S, metavar="N1,N2,...")
    p.add_argument("--n-data", default=S, metavar="K1,K2,...")
    p.add_argument("--activations", default=S, metavar="A1,A2,...")
    p.add_argument("--seeds", default=S, metavar="S1,S2,...")
    p.add_argument("--region", default=S, metavar="EXPR")
    p.add_argument("--epochs", type=int, default=S)
    p.add_argument("--restarts", type=int, default=S)
    p.add_argument("--test-size", type=int, default=S)
    p.add_argument("--ftle-pairs", type=int, default=S,
                   help="paired FTLE starts per cell (0 disables)")
    p.add_argument("--ftle-nt", type=int, default=S)
    _add_common(p)

    p = sub.add_parser("check", help="run the acceptance checks")
    p.add_argument("--criteria", default=S, metavar="I1,I2,...",
                   help="subset of check numbers (default: all)")
    p.add_argument("--models-dir", default=S,
                   help="directory of reference models (default: bundled)")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        values = _resolve(args.command, args)
        return COMMANDS[args.command](values)
    except ConfigError as err:
        print(f"chaosnn: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientPairsError as err:
        print(f"chaosnn: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (DivergenceError, PoolDivergenceError, TrainingDivergedError,
            np.linalg.LinAlgError) as err:
        print(f"chaosnn: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
