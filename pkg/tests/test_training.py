"""Levenberg-Marquardt training loop, regularization, restarts, sweeps."""

import numpy as np
import pytest

from chaosnn.activations import get as get_activation
from chaosnn.bounds import parameter_count
from chaosnn.dataset import sample_pairs
from chaosnn.network import Layer, Mlp, forward
from chaosnn.training import SweepCell, TrainConfig, rms_error, sweep, train
from oracles import random_net_arrays


def _teacher_student_data(seed, dims=(2, 3, 2), n=60):
    """Targets produced by a random net of the same architecture."""
    rng = np.random.default_rng(seed)
    teacher = Mlp([Layer(w, b) for w, b in random_net_arrays(rng, dims, 0.8)],
                  get_activation("tanh"))
    X = rng.uniform(-1.5, 1.5, size=(n, dims[0]))
    return teacher, (X, forward(teacher, X))


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()
        assert cfg.epochs == 1000 and cfg.restarts == 5
        assert cfg.mu_init == 0.005 and cfg.mu_scale == 10.0
        assert cfg.max_mu == 1e10 and cfg.bayes
        assert cfg.init_scheme == "scaled-uniform"

    def test_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            TrainConfig(restarts=0)
        with pytest.raises(ValueError):
            TrainConfig(mu_scale=1.0)
        with pytest.raises(ValueError):
            TrainConfig(init_scheme="xavier")


class TestTrain:
    def test_recovers_affine_map(self):
        # a linear-activation net *is* an affine map, so LM should drive
        # the data error to the noise floor without regularization
        rng = np.random.default_rng(0)
        A = rng.normal(size=(2, 2))
        c = rng.normal(size=2)
        X = rng.uniform(-1, 1, size=(40, 2))
        T = X @ A.T + c
        cfg = TrainConfig(epochs=60, restarts=2, bayes=False, seed=1)
        net, report = train([2, 2, 2], "linear", (X, T), cfg)
        assert report.e_data < 1e-12
        assert np.max(np.abs(forward(net, X) - T)) < 1e-6

    def test_teacher_student_convergence(self):
        teacher, data = _teacher_student_data(5)
        cfg = TrainConfig(epochs=200, restarts=3, seed=2)
        net, report = train([2, 3, 2], "tanh", data, cfg)
        Xtest = np.random.default_rng(6).uniform(-1.5, 1.5, size=(200, 2))
        assert rms_error(net, (Xtest, forward(teacher, Xtest))) < 1e-3

    def test_deterministic(self):
        _, data = _teacher_student_data(7)
        cfg = TrainConfig(epochs=30, restarts=2, seed=3)
        net_a, rep_a = train([2, 3, 2], "tanh", data, cfg)
        net_b, rep_b = train([2, 3, 2], "tanh", data, cfg)
        for la, lb in zip(net_a.layers, net_b.layers):
            assert np.array_equal(la.weights, lb.weights)
            assert np.array_equal(la.bias, lb.bias)
        assert rep_a.e_data == rep_b.e_data

    def test_more_restarts_never_hurt_selection(self):
        _, data = _teacher_student_data(9)
        val = (data[0][:20], data[1][:20])
        few = train([2, 3, 2], "tanh", data, TrainConfig(epochs=30, restarts=1, seed=4), val)[1]
        many = train([2, 3, 2], "tanh", data, TrainConfig(epochs=30, restarts=4, seed=4), val)[1]
        # restart i draws the same init regardless of the restart count
        assert many.val_e_data <= few.val_e_data

    def test_objective_never_increases_without_bayes(self):
        _, data = _teacher_student_data(11)
        cfg = TrainConfig(epochs=40, restarts=1, bayes=False, seed=5)
        _, report = train([2, 3, 2], "tanh", data, cfg)
        fs = [t["f_after"] for t in report.trace]
        assert all(b <= a + 1e-12 for a, b in zip(fs, fs[1:]))
        accepted = [t for t in report.trace if t["accepted"]]
        assert accepted, "no accepted steps in a routine run"
        assert all(t["f_after"] < t["f_before"] for t in accepted)

    def test_trace_and_epoch_accounting(self):
        _, data = _teacher_student_data(13)
        cfg = TrainConfig(epochs=25, restarts=1, seed=6)
        _, report = train([2, 3, 2], "tanh", data, cfg)
        # a run only stops early when the damping hits its cap, which can
        # happen once the fit reaches machine precision
        assert report.epochs_run <= 25
        assert len(report.trace) == report.epochs_run
        if report.epochs_run < 25:
            assert report.trace[-1]["mu"] >= cfg.max_mu
        assert {"epoch", "accepted", "f_before", "f_after", "e_data",
                "e_weights", "alpha", "beta", "gamma", "mu"} <= set(report.trace[0])

    def test_bayes_quantities_in_range(self):
        _, data = _teacher_student_data(15)
        cfg = TrainConfig(epochs=50, restarts=1, seed=7)
        _, report = train([2, 3, 2], "tanh", data, cfg)
        K = parameter_count(2, 3)
        assert report.n_params == K
        assert 0.0 <= report.gamma <= K + 1e-9
        assert report.alpha >= 0.0 and report.beta > 0.0

    def test_dimension_mismatch_rejected(self):
        X = np.zeros((10, 3))
        with pytest.raises(ValueError, match="do not match"):
            train([2, 3, 2], "tanh", (X, X))
        with pytest.raises(ValueError, match="empty"):
            train([3, 2, 3], "tanh", (np.zeros((0, 3)), np.zeros((0, 3))))


class TestSweep:
    def test_grid_order_and_cells(self, henon_pool_small):
        cfg = TrainConfig(epochs=10, restarts=1)
        cells = sweep(henon_pool_small, (2, 3), (10, 20), ("tanh",), (0, 1),
                      cfg, test_size=50)
        assert len(cells) == 8
        assert [(c.neurons, c.n_data, c.activation, c.seed) for c in cells] == [
            (L, nd, "tanh", s) for L in (2, 3) for nd in (10, 20) for s in (0, 1)]
        assert all(isinstance(c, SweepCell) for c in cells)
        assert all(np.isfinite(c.rms) for c in cells)
        assert all(c.error is None for c in cells)
        assert all(c.net is None for c in cells)  # keep_nets off by default

    def test_cell_failure_isolated(self, henon_pool_small):
        cfg = TrainConfig(epochs=10, restarts=1)
        too_many = len(henon_pool_small) + 1
        cells = sweep(henon_pool_small, (2,), (10, too_many), ("tanh",), (0,), cfg,
                      test_size=50)
        ok, bad = cells
        assert ok.error is None and np.isfinite(ok.rms)
        assert bad.error is not None and not np.isfinite(bad.rms)

    def test_keep_nets_and_determinism(self, henon_pool_small):
        cfg = TrainConfig(epochs=10, restarts=1)
        run = lambda: sweep(henon_pool_small, (2,), (15,), ("tanh",), (3,), cfg,
                            test_size=50, keep_nets=True)
        a, b = run()[0], run()[0]
        assert a.net is not None
        assert np.array_equal(a.net.layers[0].weights, b.net.layers[0].weights)
        assert a.rms == b.rms

    def test_ftle_scoring_optional(self, henon_pool_small):
        cfg = TrainConfig(epochs=150, restarts=2)
        cells = sweep(henon_pool_small, (2,), (20,), ("tanh",), (1,), cfg,
                      test_size=50, ftle_pairs=8, ftle_nt=5)
        cell = cells[0]
        assert np.isfinite(cell.ftle_rms) or cell.error is not None


class TestRmsError:
    def test_matches_manual(self):
        net = Mlp([Layer(np.eye(2), np.zeros(2)), Layer(np.eye(2), np.zeros(2))],
                  get_activation("linear"))
        X = np.array([[1.0, 2.0], [3.0, 4.0]])
        T = np.array([[1.0, 2.0], [0.0, 0.0]])
        # residuals: zero on the first row, (3, 4) on the second
        assert np.isclose(rms_error(net, (X, T)), np.sqrt((9 + 16) / 4))
