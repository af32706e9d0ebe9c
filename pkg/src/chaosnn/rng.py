"""Deterministic random streams.

Every operation that consumes randomness derives its own child generator
from (user seed, role tag, *indices) through a counter-based Philox
bit generator.  Substreams are independent by construction, so parallel
workers (pool trajectories, training restarts, sweep cells) can draw
without coordination and results never depend on scheduling order.
"""
from __future__ import annotations

import numpy as np

# Role tags keep substreams of unrelated operations disjoint even when the
# same user seed is passed everywhere.
POOL = 1       # dataset.generate_pool, one substream per trajectory
SAMPLE = 2     # dataset.sample_pairs
PAIRING = 3    # ftle.pair_points start-point selection
INIT = 4       # training weight initialisation, one substream per restart
CLOUD = 5      # ftle_compare emulator-cloud generation
SWEEP = 6      # per-cell derivation in training.sweep
POLY = 7       # bounds.nn_poly_error sample draw


def stream(seed: int, *key: int) -> np.random.Generator:
    """A Generator seeded from (seed, *key) via SeedSequence + Philox."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), *map(int, key)))))
