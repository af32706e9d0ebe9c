"""MLP forward/Jacobian algebra, neuron-space maps, persistence, adapters."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaosnn.activations import ACTIVATIONS, get as get_activation
from chaosnn.dynamics import DivergenceError
from chaosnn.network import (Layer, Mlp, MlpMap, bundled_model, decode,
                             effective_pair, forward, jacobian, load_model,
                             multilayer_growth, neuron_encode, neuron_step,
                             perturbation_growth, save_model)
from oracles import forward_fd_jacobian, random_net_arrays, scalar_forward


def _net(seed, dims=(3, 4, 3), activation="tanh", scale=0.5):
    rng = np.random.default_rng(seed)
    layers = [Layer(w, b) for w, b in random_net_arrays(rng, dims, scale)]
    return Mlp(layers, get_activation(activation))


class TestActivations:
    def test_all_eight_registered(self):
        assert sorted(ACTIVATIONS) == ["elliotsig", "linear", "logsig", "radbas",
                                       "relu", "softplus", "tanh", "tribas"]
        assert len({a.code for a in ACTIVATIONS.values()}) == 8

    def test_relu_right_derivative_at_zero(self):
        assert get_activation("relu").deriv(np.array([0.0]))[0] == 1.0

    def test_tribas_kink_convention(self):
        g = get_activation("tribas")
        z = np.array([-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5])
        assert np.array_equal(g.value(z), [0.0, 0.0, 0.5, 1.0, 0.5, 0.0, 0.0])
        # right derivative at the kinks at -1 and 0, interior value at +1
        assert np.array_equal(g.deriv(z), [0.0, 1.0, 1.0, -1.0, -1.0, -1.0, 0.0])

    @given(z=st.floats(-30, 30))
    def test_derivatives_match_fd(self, z):
        h = 1e-6
        for name, act in ACTIVATIONS.items():
            if name in ("relu", "tribas"):  # kinked
                continue
            fd = (act.value(z + h) - act.value(z - h)) / (2 * h)
            assert abs(fd - act.deriv(np.array(z))) < 1e-5


class TestForwardAndJacobian:
    @given(seed=st.integers(0, 2**32 - 1))
    def test_forward_matches_scalar_loops(self, seed):
        net = _net(seed)
        rng = np.random.default_rng(seed + 1)
        x = rng.uniform(-2, 2, size=3)
        arrays = [(l.weights, l.bias) for l in net.layers]
        assert np.allclose(forward(net, x),
                           scalar_forward(arrays, np.tanh, x),
                           rtol=0, atol=1e-12)

    def test_forward_batch_rows(self):
        net = _net(7)
        X = np.random.default_rng(8).uniform(-1, 1, size=(11, 3))
        batch = forward(net, X)
        assert batch.shape == (11, 3)
        for i in range(11):
            # gemm vs gemv accumulate in different orders
            assert np.allclose(batch[i], forward(net, X[i]), rtol=0, atol=1e-13)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_jacobian_matches_fd(self, seed):
        net = _net(seed)
        x = np.random.default_rng(seed + 1).uniform(-2, 2, size=3)
        fd = forward_fd_jacobian(lambda v: forward(net, v), x)
        assert np.max(np.abs(fd - jacobian(net, x))) < 1e-5

    def test_jacobian_deep_net(self):
        net = _net(3, dims=(2, 5, 4, 2))
        x = np.array([0.3, -0.7])
        fd = forward_fd_jacobian(lambda v: forward(net, v), x)
        assert np.max(np.abs(fd - jacobian(net, x))) < 1e-5


class TestNeuronSpace:
    def test_encode_decode_is_forward(self):
        net = _net(11)
        x = np.array([0.5, -1.0, 0.25])
        assert np.allclose(decode(net, neuron_encode(net, x)), forward(net, x),
                           rtol=0, atol=1e-14)

    def test_effective_pair_shapes_and_rank(self):
        net = bundled_model("lorenz63_4n40")
        pair = effective_pair(net)
        assert pair.wstar.shape == (4, 4)
        assert pair.bstar.shape == (4,)
        assert np.linalg.matrix_rank(pair.wstar) <= 3
        w1, w2 = net.layers[0].weights, net.layers[1].weights
        assert np.array_equal(pair.wstar, w1 @ w2)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_homomorphism(self, seed):
        """Stepping in neuron space then decoding equals decoding then stepping."""
        net = _net(seed)
        y = np.random.default_rng(seed + 1).uniform(-1, 1, size=4)
        a = decode(net, neuron_step(net, y))
        b = forward(net, decode(net, y))
        assert np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))) < 1e-12

    def test_homomorphism_bundled_nets(self):
        rng = np.random.default_rng(0)
        for name in ("lorenz63_4n40", "henon_2n20"):
            net = bundled_model(name)
            L = net.layers[0].weights.shape[0]
            for _ in range(50):
                y = rng.uniform(-1, 1, size=L)
                a = decode(net, neuron_step(net, y))
                b = forward(net, decode(net, y))
                assert np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))) < 1e-12

    @given(seed=st.integers(0, 2**32 - 1))
    def test_perturbation_growth_matches_linearization(self, seed):
        net = _net(seed)
        rng = np.random.default_rng(seed + 1)
        y = rng.uniform(-1, 1, size=4)
        dy = rng.normal(size=4) * 1e-7
        grown = perturbation_growth(net, y, dy)
        fd = neuron_step(net, y + dy) - neuron_step(net, y)
        assert np.max(np.abs(grown - fd)) < 1e-9

    def test_multilayer_growth_matches_fd(self):
        net = _net(5, dims=(2, 6, 5, 2))
        x = np.array([0.4, -0.2])
        dx = np.array([1e-7, -2e-7])
        grown = multilayer_growth(net, x, dx)
        fd = forward(net, x + dx) - forward(net, x)
        assert np.max(np.abs(grown - fd)) < 1e-10


class TestBundledModels:
    def test_lorenz_model_layout(self):
        net = bundled_model("lorenz63_4n40")
        assert net.dims == [3, 4, 3]
        assert net.activation.name == "tanh"
        assert net.map_id == "lorenz63"
        # second-layer weights stored (outputs, neurons)
        assert net.layers[1].weights.shape == (3, 4)

    def test_lorenz_model_bias_squash_regression(self):
        b1 = bundled_model("lorenz63_4n40").layers[0].bias
        assert np.allclose(np.tanh(b1), (0.1681, -0.5410, -0.0449, 0.1755),
                           atol=1.5e-4)

    def test_henon_model_layout(self):
        net = bundled_model("henon_2n20")
        assert net.dims == [2, 2, 2]
        assert net.map_id == "henon"

    def test_unknown_bundled_name(self):
        with pytest.raises(FileNotFoundError):
            bundled_model("nonexistent")


class TestPersistence:
    def test_round_trip_exact(self, tmp_path):
        net = _net(13, dims=(2, 3, 2), activation="softplus")
        path = tmp_path / "model.json"
        save_model(net, path)
        again = load_model(path)
        for a, b in zip(net.layers, again.layers):
            assert np.array_equal(a.weights, b.weights)
            assert np.array_equal(a.bias, b.bias)
        assert again.activation.name == "softplus"

    def test_schema_fields(self, tmp_path):
        net = _net(17)
        path = tmp_path / "model.json"
        save_model(net, path)
        doc = json.loads(path.read_text())
        assert doc["dims"] == [3, 4, 3]
        assert doc["activation"] == "tanh"
        assert len(doc["layers"]) == 2
        first = doc["layers"][0]
        assert first["rows"] == 4 and first["cols"] == 3
        assert len(first["weights"]) == 12 and len(first["bias"]) == 4

    def test_corrupt_weights_rejected(self, tmp_path):
        net = _net(19)
        path = tmp_path / "model.json"
        save_model(net, path)
        doc = json.loads(path.read_text())
        doc["layers"][0]["weights"] = doc["layers"][0]["weights"][:-1]
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError):
            load_model(path)

    def test_layer_shape_validation(self):
        with pytest.raises(ValueError):
            Layer(np.zeros((2, 3)), np.zeros(5))
        with pytest.raises(ValueError):
            Mlp([Layer(np.zeros((4, 3)), np.zeros(4)),
                 Layer(np.zeros((3, 5)), np.zeros(3))], get_activation("tanh"))


class TestMlpMap:
    def test_iterate_composes_with_apply(self):
        m = MlpMap(bundled_model("henon_2n20"))
        x0 = np.array([0.1, 0.1])
        traj = m.iterate(x0, 20)
        x = x0
        for k in range(1, 21):
            x = m.apply(x)
            assert np.array_equal(traj[k], x)

    def test_fallback_path_for_deep_nets(self):
        net = _net(23, dims=(2, 4, 4, 2))
        m = MlpMap(net)
        x0 = np.array([0.2, -0.1])
        traj = m.iterate(x0, 4)
        assert np.allclose(traj[1], forward(net, x0), rtol=0, atol=1e-14)

    def test_divergence_raises_with_step(self):
        explosive = Mlp([Layer(np.eye(2) * 4.0, np.zeros(2)),
                         Layer(np.eye(2) * 4.0, np.zeros(2))],
                        get_activation("linear"))
        with pytest.raises(DivergenceError) as err:
            MlpMap(explosive).iterate(np.array([1.0, 1.0]), 100)
        assert err.value.step >= 1

    def test_map_id_prefix(self):
        assert MlpMap(bundled_model("lorenz63_4n40")).map_id == "nn-lorenz63"
