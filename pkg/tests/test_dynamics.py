"""Integrator accuracy, closed-form map identities, kernel consistency."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaosnn.dynamics import (DivergenceError, HenonMap, L63Params,
                              Lorenz63Map, MAPS, make_map)
from oracles import forward_fd_jacobian, henon_jacobian, lorenz_rhs, rk4_advance


def _attractor_states():
    """A few states on the Lorenz attractor, via burn-in."""
    orbit = Lorenz63Map().iterate(np.array([1.0, 1.0, 20.0]), 400)
    return orbit[[150, 260, 399]]


class TestLorenz63:
    def test_rhs_values(self):
        m = Lorenz63Map()
        assert np.allclose(m.rhs(np.array([1.0, 2.0, 3.0])),
                           lorenz_rhs(np.array([1.0, 2.0, 3.0])))

    @given(seed=st.integers(0, 2**32 - 1))
    def test_rhs_jacobian_matches_fd(self, seed):
        m = Lorenz63Map()
        x = np.random.default_rng(seed).uniform(-25, 25, size=3)
        fd = forward_fd_jacobian(m.rhs, x)
        assert np.max(np.abs(fd - m.rhs_jacobian(x))) < 1e-4

    @pytest.mark.parametrize("x0", list(_attractor_states()))
    def test_apply_matches_tight_rk4(self, x0):
        stepped = Lorenz63Map().apply(x0)
        oracle = rk4_advance(lorenz_rhs, x0, 0.01, 200)
        assert np.max(np.abs(stepped - oracle)) < 1e-8

    def test_adaptive_matches_fine_fixed_grid(self):
        m = Lorenz63Map()
        for x0 in _attractor_states():
            assert np.max(np.abs(m.apply(x0) - m.apply_fixed(x0, 1000))) < 1e-9

    def test_fixed_substep_convergence_order(self):
        # at dt = 0.5 the truncation error is large enough to measure;
        # a 4(5) pair propagates its 5th-order solution, so halving the
        # substep width should shrink the error by about 2^5
        m = Lorenz63Map(L63Params(dt=0.5))
        x0 = _attractor_states()[0]
        ref = m.apply_fixed(x0, 512)
        e2 = np.max(np.abs(m.apply_fixed(x0, 2) - ref))
        e4 = np.max(np.abs(m.apply_fixed(x0, 4) - ref))
        assert e2 / e4 > 16.0

    def test_iterate_shape_and_start(self):
        m = Lorenz63Map()
        x0 = np.array([1.0, 1.0, 20.0])
        traj = m.iterate(x0, 50)
        assert traj.shape == (51, 3)
        assert np.array_equal(traj[0], x0)
        assert np.array_equal(m.iterate(x0, 0), x0[None, :])

    def test_iterate_composes_with_apply(self):
        m = Lorenz63Map()
        x0 = _attractor_states()[1]
        traj = m.iterate(x0, 5)
        x = x0
        for k in range(1, 6):
            x = m.apply(x)
            assert np.array_equal(traj[k], x)

    def test_guard_triggers_divergence_error(self):
        tight = Lorenz63Map(guard=30.0)  # z tops 40+ on the attractor
        with pytest.raises(DivergenceError) as err:
            tight.iterate(np.array([1.0, 1.0, 20.0]), 2000)
        assert 1 <= err.value.step <= 2000

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
    def test_advance_block_matches_apply(self, seed, n):
        m = Lorenz63Map()
        rng = np.random.default_rng(seed)
        states = rng.uniform([-15, -20, 5], [15, 20, 40], size=(4, 3))
        expected = states.copy()
        for i in range(4):
            x = expected[i]
            for _ in range(n):
                x = m.apply(x)
            expected[i] = x
        m.advance_block(states, n)
        assert np.array_equal(states, expected)


class TestHenon:
    def test_first_steps_closed_form(self):
        traj = HenonMap().iterate(np.zeros(2), 2)
        # 1 - 1.4*1 lands one ulp away from the -0.4 literal
        assert np.allclose(traj, [[0.0, 0.0], [1.0, 0.0], [-0.4, 0.3]],
                           rtol=0, atol=1e-15)

    @given(x=st.floats(-1e100, 1e100), y=st.floats(-1e100, 1e100))
    def test_substeps_compose_bit_exact(self, x, y):
        m = HenonMap()
        state = np.array([x, y])
        s1, s2, s3 = m.substeps(state)
        assert np.array_equal(s3, m.apply(state))
        # stretch/fold keeps x, compression keeps the folded coordinate
        assert s1[0] == state[0]
        assert s2[1] == s1[1]
        assert s3[0] == s2[1] and s3[1] == s2[0]

    @given(x=st.floats(-5, 5), y=st.floats(-5, 5))
    def test_jacobian_closed_form(self, x, y):
        state = np.array([x, y])
        jac = HenonMap().jacobian(state)
        assert np.array_equal(jac, henon_jacobian(state))
        assert np.isclose(np.linalg.det(jac), -0.3, atol=1e-12)

    def test_jacobian_matches_fd(self):
        m = HenonMap()
        x = np.array([0.3, -0.1])
        fd = forward_fd_jacobian(m.apply, x)
        assert np.max(np.abs(fd - m.jacobian(x))) < 1e-5

    def test_fixed_point_invariant(self):
        m = HenonMap()
        fp = m.fixed_point()
        assert np.max(np.abs(m.apply(fp) - fp)) < 1e-12

    def test_divergence_reports_step(self):
        with pytest.raises(DivergenceError) as err:
            HenonMap().iterate(np.array([10.0, 10.0]), 100)
        assert 1 <= err.value.step < 10

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 20))
    def test_advance_block_matches_apply(self, seed, n):
        m = HenonMap()
        rng = np.random.default_rng(seed)
        states = rng.uniform(-0.5, 0.5, size=(6, 2))
        expected = states.copy()
        for i in range(6):
            x = expected[i]
            for _ in range(n):
                x = m.apply(x)
            expected[i] = x
        m.advance_block(states, n)
        assert np.array_equal(states, expected)


class TestRegistry:
    def test_ids_and_dims(self):
        assert set(MAPS) == {"lorenz63", "henon"}
        assert make_map("lorenz63").dim == 3
        assert make_map("henon").dim == 2

    def test_params_override_and_round_trip(self):
        m = make_map("henon", a=1.2, b=0.25)
        assert m.params.a == 1.2 and m.params.b == 0.25
        again = make_map(m.map_id, **m.params_dict())
        assert again.params == m.params

    def test_unknown_id_raises(self):
        with pytest.raises(ValueError, match="unknown map"):
            make_map("rossler")
