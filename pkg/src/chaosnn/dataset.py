"""Attractor-resident training pools.

The sampling protocol is: seed many trajectories uniformly in a coarse
box, discard a long transient so the survivors live on the attractor,
and keep consecutive (state, next state) pairs.  Training sets are drawn
from that pool uniformly without replacement, optionally restricted to a
sub-region of phase space (the restriction tests how emulators behave
when launched from states they never saw).
"""
from __future__ import annotations

import csv
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DivergenceError, make_map
from .rng import POOL, SAMPLE, stream

AXIS_NAMES = ("x", "y", "z")

# Default seeding boxes: generous rectangles inside each map's basin.
DEFAULT_INIT_BOX = {
    "lorenz63": ((-20.0, 20.0), (-20.0, 20.0), (0.0, 50.0)),
    "henon": ((-0.5, 0.5), (-0.5, 0.5)),
}
DEFAULT_POOL_SHAPE = {"n_traj": 1000, "n_steps": 2500, "n_discard": 2000}

MAX_CONSECUTIVE_DIVERGED = 10


class PoolDivergenceError(RuntimeError):
    """Too many consecutive diverged initial-condition draws."""


class InsufficientPairsError(ValueError):
    """Fewer filter-passing pairs than the requested sample size."""


_COMPARISON = re.compile(r"^\s*([a-z])\s*(<=|>=|<|>)\s*([-+0-9.eE]+)\s*$")


@dataclass(frozen=True)
class RegionFilter:
    """Axis-aligned bounds applied to a pair's *input* point.

    `lo`/`hi` hold one value per axis; -inf/+inf mean unbounded.  Bounds
    are strict (a point sitting exactly on a bound is excluded), which is
    immaterial on-attractor but keeps "X > -5" literal.
    """

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo/hi length mismatch")
        for a, b in zip(self.lo, self.hi):
            if not a <= b:
                raise ValueError(f"empty region: lower {a} > upper {b}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def mask(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return np.all((pts > lo) & (pts < hi), axis=1)

    @classmethod
    def unbounded(cls, dim: int) -> "RegionFilter":
        return cls((-np.inf,) * dim, (np.inf,) * dim)

    @classmethod
    def parse(cls, text: str, dim: int) -> "RegionFilter":
        """Parse comma-separated comparisons, e.g. ``"x>-5"`` or ``"x>-5,z<40"``."""
        lo = [-np.inf] * dim
        hi = [np.inf] * dim
        for clause in text.split(","):
            m = _COMPARISON.match(clause)
            if not m:
                raise ValueError(f"cannot parse region clause {clause!r}")
            axis_name, op, value = m.group(1), m.group(2), float(m.group(3))
            try:
                axis = AXIS_NAMES.index(axis_name)
            except ValueError:
                raise ValueError(f"unknown axis {axis_name!r}") from None
            if axis >= dim:
                raise ValueError(f"axis {axis_name!r} out of range for dim {dim}")
            if op.startswith(">"):
                lo[axis] = max(lo[axis], value)
            else:
                hi[axis] = min(hi[axis], value)
        return cls(tuple(lo), tuple(hi))


@dataclass
class PairPool:
    """All (input, output) pairs harvested from the seeded trajectories."""

    map_id: str
    map_params: dict
    seed: int
    n_traj: int
    n_steps: int
    n_discard: int
    init_box: np.ndarray  # (dim, 2)
    inputs: np.ndarray  # (N, dim)
    outputs: np.ndarray  # (N, dim)
    retries: int = field(default=0)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]

    def pairs(self):
        yield from zip(self.inputs, self.outputs)


def _one_trajectory(map_obj, n_steps, n_discard, lo, span, seed, index):
    rng = stream(seed, POOL, index)
    failures = 0
    while True:
        ic = lo + rng.random(lo.shape[0]) * span
        try:
            traj = map_obj.iterate(ic, n_steps)
            break
        except DivergenceError:
            failures += 1
            if failures >= MAX_CONSECUTIVE_DIVERGED:
                raise PoolDivergenceError(
                    f"{failures} consecutive diverged initial conditions "
                    f"(trajectory {index}, seed {seed})"
                ) from None
    return traj[n_discard:n_steps], traj[n_discard + 1 : n_steps + 1], failures


def generate_pool(map_obj, n_traj: int, n_steps: int, n_discard: int,
                  init_box, seed: int, jobs: int = 1) -> PairPool:
    """Harvest n_traj x (n_steps - n_discard) consistent pairs.

    Each trajectory owns RNG substream (seed, POOL, trajectory index), so
    the pool is identical for any `jobs`; diverged initial conditions are
    redrawn from that same substream.
    """
    if not n_discard < n_steps:
        raise ValueError("require n_discard < n_steps")
    box = np.asarray(init_box, dtype=float)
    if box.shape != (map_obj.dim, 2):
        raise ValueError(f"init_box shape {box.shape} does not match map dim {map_obj.dim}")
    lo = box[:, 0]
    span = box[:, 1] - box[:, 0]
    per = n_steps - n_discard

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(
                lambda t: _one_trajectory(map_obj, n_steps, n_discard, lo, span, seed, t),
                range(n_traj),
            ))
    else:
        results = [_one_trajectory(map_obj, n_steps, n_discard, lo, span, seed, t)
                   for t in range(n_traj)]

    inputs = np.empty((n_traj * per, map_obj.dim))
    outputs = np.empty_like(inputs)
    retries = 0
    for t, (xin, xout, failures) in enumerate(results):
        inputs[t * per : (t + 1) * per] = xin
        outputs[t * per : (t + 1) * per] = xout
        retries += failures
    return PairPool(map_obj.map_id, map_obj.params_dict(), int(seed), n_traj,
                    n_steps, n_discard, box, inputs, outputs, retries)


def sample_pairs(pool: PairPool, k: int, region: RegionFilter | None = None,
                 seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """k distinct pairs, uniform without replacement among filter passers."""
    if region is None:
        eligible = np.arange(len(pool))
    else:
        eligible = np.flatnonzero(region.mask(pool.inputs))
    if eligible.size < k:
        raise InsufficientPairsError(
            f"requested {k} pairs but only {eligible.size} pass the region filter"
        )
    rng = stream(seed, SAMPLE)
    idx = rng.choice(eligible, size=k, replace=False) if k else np.empty(0, dtype=int)
    return pool.inputs[idx].copy(), pool.outputs[idx].copy()


def attractor_cloud(pool: PairPool) -> np.ndarray:
    """Every pair's input state, with bit-identical duplicates dropped."""
    if len(pool) == 0:
        raise ValueError("empty pool")
    _, first = np.unique(pool.inputs, axis=0, return_index=True)
    return pool.inputs[np.sort(first)]


def _axis_header(dim: int) -> list[str]:
    names = list(AXIS_NAMES[:dim])
    return names + [n + "p" for n in names]


def save_pool(pool: PairPool, csv_path) -> None:
    """Write the pool as CSV plus a JSON sidecar with generation params."""
    csv_path = str(csv_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_axis_header(pool.dim))
        for xin, xout in zip(pool.inputs, pool.outputs):
            writer.writerow([format(v, ".17g") for v in (*xin, *xout)])
    sidecar = {
        "map_id": pool.map_id,
        "params": pool.map_params,
        "seed": pool.seed,
        "n_traj": pool.n_traj,
        "n_steps": pool.n_steps,
        "n_discard": pool.n_discard,
        "init_box": pool.init_box.tolist(),
    }
    with open(_sidecar_path(csv_path), "w") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")


def _sidecar_path(csv_path: str) -> str:
    return re.sub(r"\.csv$", "", csv_path) + ".json"


def load_pool(csv_path) -> PairPool:
    csv_path = str(csv_path)
    with open(_sidecar_path(csv_path)) as fh:
        meta = json.load(fh)
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    dim = data.shape[1] // 2
    return PairPool(
        map_id=meta["map_id"],
        map_params=meta["params"],
        seed=meta["seed"],
        n_traj=meta["n_traj"],
        n_steps=meta["n_steps"],
        n_discard=meta["n_discard"],
        init_box=np.asarray(meta["init_box"], dtype=float),
        inputs=data[:, :dim],
        outputs=data[:, dim:],
    )


def default_pool(map_id: str, seed: int, jobs: int = 1, **overrides) -> PairPool:
    """Pool with the protocol defaults for the named map."""
    shape = dict(DEFAULT_POOL_SHAPE)
    shape.update({k: overrides[k] for k in ("n_traj", "n_steps", "n_discard") if k in overrides})
    box = overrides.get("init_box", DEFAULT_INIT_BOX[map_id])
    return generate_pool(make_map(map_id), shape["n_traj"], shape["n_steps"],
                         shape["n_discard"], box, seed, jobs=jobs)
