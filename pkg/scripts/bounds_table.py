"""Tabulate neuron-count lower bounds across attractor dimensions.

Prints the four bound families (agnostic-learning, exact polynomial
construction, parameter counting, cubic-Taylor coefficient counting) for a
range of widths, and optionally scores how well an actual trained net is
described by its own cubic expansion on attractor data.
"""

import argparse

from chaosnn.bounds import bounds_table, nn_poly_error
from chaosnn.dataset import attractor_cloud, default_pool
from chaosnn.dynamics import make_map
from chaosnn.network import bundled_model, load_model
import os


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--neurons", type=int, nargs="+", default=[2, 3, 4, 6, 8])
    ap.add_argument("--dim", type=int, default=2,
                    help="polynomial degree / input dimension for the table")
    ap.add_argument("--eps", type=float, default=1.0)
    ap.add_argument("--model", help="model file or bundled name to score")
    ap.add_argument("--n-samples", type=int, default=5000)
    args = ap.parse_args()

    names = None
    table = {}
    for n in args.neurons:
        rows = bounds_table(n, args.dim, args.eps)
        names = [b.name for b in rows]
        table[n] = rows
    header = f"{'n':>3} " + " ".join(f"{name:>14}" for name in names)
    print(header)
    for n in args.neurons:
        cells = []
        for b in table[n]:
            shown = b.value_ceil if b.value_ceil is not None else b.value
            cells.append(f"{float(shown):>14.6g}")
        print(f"{n:3d} " + " ".join(cells))

    if args.model:
        net = (load_model(args.model) if os.path.isfile(args.model)
               else bundled_model(args.model))
        if net.map_id is None:
            raise SystemExit("model carries no map id; cannot score it")
        pool = default_pool(net.map_id, seed=0)
        rep = nn_poly_error(net, make_map(net.map_id), attractor_cloud(pool),
                            n_samples=args.n_samples, seed=0)
        print(f"\ncubic-expansion error of {args.model}: "
              f"epsilon {rep.epsilon:.4f} (raw rms {rep.raw_rms:.4f}, "
              f"{rep.n_samples} samples)")


if __name__ == "__main__":
    main()
