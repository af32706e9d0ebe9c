"""Train a minimal Lorenz emulator and overlay it on the true trajectory.

Trains a single-hidden-layer tanh net on a handful of attractor pairs
(default 4 neurons / 40 pairs), then iterates both the true map and the
net from the same on-attractor start.  Writes the paired trajectory CSV
and an SVG projection into --out and prints where (or whether) the two
orbits decorrelate.
"""

import argparse
import csv
import os

import numpy as np

from chaosnn.dataset import generate_pool, sample_pairs
from chaosnn.dynamics import make_map
from chaosnn.network import MlpMap, load_model, save_model
from chaosnn.svg import write_polyline_svg
from chaosnn.training import TrainConfig, rms_error, train

INIT_BOX = [(-20.0, 20.0), (-20.0, 20.0), (0.0, 50.0)]


def build_net(args, pool):
    data = sample_pairs(pool, args.n_data, seed=args.data_seed)
    val = sample_pairs(pool, 1000, seed=args.data_seed + 1)
    cfg = TrainConfig(epochs=args.epochs, restarts=args.restarts,
                      seed=args.seed)
    net, report = train([3, args.neurons, 3], "tanh", data, cfg, val,
                        map_id="lorenz63")
    test = sample_pairs(pool, 2000, seed=args.data_seed + 2)
    print(f"trained [3, {args.neurons}, 3] on {args.n_data} pairs: "
          f"E_D {report.e_data:.3g}, gamma {report.gamma:.1f}/{report.n_params}, "
          f"test rms {rms_error(net, test):.4f}")
    return net


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", help="reuse a saved model instead of training")
    ap.add_argument("--neurons", type=int, default=4)
    ap.add_argument("--n-data", type=int, default=40)
    ap.add_argument("--epochs", type=int, default=1000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--n-steps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--data-seed", type=int, default=0)
    ap.add_argument("--out", default="runs/trajectory_comparison")
    args = ap.parse_args()

    truth = make_map("lorenz63")
    os.makedirs(args.out, exist_ok=True)
    if args.model:
        net = load_model(args.model)
    else:
        pool = generate_pool(truth, 300, 700, 500, INIT_BOX, seed=1)
        net = build_net(args, pool)
        save_model(net, os.path.join(args.out, "model.json"))

    start = truth.iterate(np.array([1.0, 1.0, 20.0]), 2000)[-1]
    truth_traj = truth.iterate(start, args.n_steps)
    emu = MlpMap(net)
    emu_traj = np.full_like(truth_traj, np.nan)
    emu_traj[0], x = start, start
    diverged_at = None
    for k in range(1, args.n_steps + 1):
        x = emu.apply(x)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > emu.guard:
            diverged_at = k
            break
        emu_traj[k] = x

    csv_path = os.path.join(args.out, "trajectory.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "truth_x", "truth_y", "truth_z",
                    "emulator_x", "emulator_y", "emulator_z"])
        for k in range(args.n_steps + 1):
            w.writerow([k, *truth_traj[k], *emu_traj[k]])
    keep = diverged_at if diverged_at is not None else args.n_steps + 1
    write_polyline_svg(os.path.join(args.out, "trajectory.svg"),
                       [truth_traj[:, (0, 2)], emu_traj[:keep, (0, 2)]],
                       labels=["truth", "emulator"],
                       title=f"lorenz63 X-Z: truth vs {args.neurons}-neuron emulator")

    gap = np.linalg.norm(truth_traj - emu_traj, axis=1)
    apart = np.nonzero(gap > 1.0)[0]
    print(f"orbits stay within distance 1 for "
          f"{apart[0] if apart.size else args.n_steps + 1} steps"
          + (f"; emulator diverged at step {diverged_at}" if diverged_at else ""))
    print(f"wrote {csv_path} and trajectory.svg")


if __name__ == "__main__":
    main()
