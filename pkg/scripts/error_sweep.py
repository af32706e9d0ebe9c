"""Grid sweep of emulator error over network size and training-set size.

Trains one net per (neurons, n_data) cell and tabulates held-out rms
error, optionally with a paired finite-time-exponent error column.  The
table lands in --out/sweep.csv; the console gets the best cell per
neuron count, which is where the error floor as a function of width is
easiest to read off.
"""

import argparse
import csv
import os
from collections import defaultdict

from chaosnn.dataset import generate_pool
from chaosnn.dynamics import make_map
from chaosnn.training import TrainConfig, sweep

INIT_BOX = {"lorenz63": [(-20.0, 20.0), (-20.0, 20.0), (0.0, 50.0)],
            "henon": [(-0.5, 0.5), (-0.5, 0.5)]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--map", default="lorenz63", choices=sorted(INIT_BOX))
    ap.add_argument("--neurons", type=int, nargs="+",
                    default=[3, 4, 5, 6, 7, 8])
    ap.add_argument("--n-data", type=int, nargs="+",
                    default=[20, 30, 40, 60, 100, 150])
    ap.add_argument("--activations", nargs="+", default=["tanh"])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--epochs", type=int, default=1000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--ftle-pairs", type=int, default=0,
                    help="paired exponent starts per cell (0 disables)")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="runs/error_sweep")
    args = ap.parse_args()

    pool = generate_pool(make_map(args.map), 300, 700, 500,
                         INIT_BOX[args.map], seed=1, jobs=args.jobs)
    cfg = TrainConfig(epochs=args.epochs, restarts=args.restarts)
    cells = sweep(pool, args.neurons, args.n_data, args.activations,
                  args.seeds, cfg, ftle_pairs=args.ftle_pairs,
                  jobs=args.jobs)

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "sweep.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["neurons", "n_data", "activation", "seed",
                    "rms", "ftle_rms"])
        for c in cells:
            w.writerow([c.neurons, c.n_data, c.activation, c.seed,
                        c.rms, c.ftle_rms])

    best = defaultdict(lambda: None)
    for c in cells:
        if c.rms == c.rms:  # skip failed cells (rms is nan)
            if best[c.neurons] is None or c.rms < best[c.neurons].rms:
                best[c.neurons] = c
    print(f"{'neurons':>7} {'best rms':>10} {'at n_data':>9}  activation")
    for L in sorted(best):
        c = best[L]
        if c is not None:
            print(f"{L:7d} {c.rms:10.4f} {c.n_data:9d}  {c.activation}")
    failed = sum(1 for c in cells if c.error)
    print(f"{len(cells)} cells swept ({failed} failed); table in {path}")


if __name__ == "__main__":
    main()
