"""Minimal neural emulators of chaotic maps and their geometric anatomy.

Train tiny single-hidden-layer nets to mimic the Lorenz-63 and Henon
maps, check that the emulators share the originals' predictability
structure (finite-time Lyapunov exponents), decompose the learned map
into rotation/stretch/compression sub-steps, and evaluate closed-form
lower bounds on how small such an emulator could possibly be.
"""
from .activations import ACTIVATIONS, get as get_activation
from .bounds import (andoni_bound, bounds_table, expand_cubic, nn_poly_error,
                     polynet_bound, standard_nn_bound, taylor_count_bound)
from .dataset import (PairPool, RegionFilter, attractor_cloud, generate_pool,
                      load_pool, sample_pairs, save_pool)
from .dynamics import (DivergenceError, HenonMap, HenonParams, L63Params,
                       Lorenz63Map, make_map)
from .ftle import (FtleRecord, fd_jacobian, ftle_compare, long_run_lyapunov,
                   max_ftle, pair_points)
from .geometry import (classify_orthogonal_2d, compression_certificate,
                       principal_angles, stretch_count, svd_wstar, trace_substeps)
from .network import (EffectivePair, Layer, Mlp, MlpMap, bundled_model, decode,
                      effective_pair, forward, jacobian, load_model,
                      multilayer_growth, neuron_encode, neuron_step,
                      perturbation_growth, save_model)
from .training import TrainConfig, TrainReport, rms_error, sweep, train

__version__ = "0.1.0"

__all__ = [
    "ACTIVATIONS", "get_activation",
    "andoni_bound", "bounds_table", "expand_cubic", "nn_poly_error",
    "polynet_bound", "standard_nn_bound", "taylor_count_bound",
    "PairPool", "RegionFilter", "attractor_cloud", "generate_pool",
    "load_pool", "sample_pairs", "save_pool",
    "DivergenceError", "HenonMap", "HenonParams", "L63Params",
    "Lorenz63Map", "make_map",
    "FtleRecord", "fd_jacobian", "ftle_compare", "long_run_lyapunov",
    "max_ftle", "pair_points",
    "classify_orthogonal_2d", "compression_certificate", "principal_angles",
    "stretch_count", "svd_wstar", "trace_substeps",
    "EffectivePair", "Layer", "Mlp", "MlpMap", "bundled_model", "decode",
    "effective_pair", "forward", "jacobian", "load_model",
    "multilayer_growth", "neuron_encode", "neuron_step",
    "perturbation_growth", "save_model",
    "TrainConfig", "TrainReport", "rms_error", "sweep", "train",
    "__version__",
]
