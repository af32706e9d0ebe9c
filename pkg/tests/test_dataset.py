"""Pool generation protocol, sampling, region filters, persistence."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaosnn.dataset import (DEFAULT_INIT_BOX, DEFAULT_POOL_SHAPE,
                             InsufficientPairsError, PoolDivergenceError,
                             RegionFilter, attractor_cloud, default_pool,
                             generate_pool, load_pool, sample_pairs, save_pool)
from chaosnn.dynamics import HenonMap, Lorenz63Map, make_map


class TestGeneratePool:
    def test_size_arithmetic(self, henon_pool_small):
        # n_traj * (n_steps - n_discard) pairs
        assert len(henon_pool_small) == 20 * (600 - 500)
        assert henon_pool_small.inputs.shape == (2000, 2)
        assert henon_pool_small.outputs.shape == (2000, 2)

    def test_default_protocol_shape(self):
        assert DEFAULT_POOL_SHAPE == {"n_traj": 1000, "n_steps": 2500,
                                      "n_discard": 2000}
        assert np.array_equal(DEFAULT_INIT_BOX["lorenz63"],
                              [(-20, 20), (-20, 20), (0, 50)])

    def test_pairs_are_consecutive_map_states(self, henon_pool_small):
        m = HenonMap()
        idx = np.random.default_rng(1).choice(len(henon_pool_small), 50)
        for i in idx:
            stepped = m.apply(henon_pool_small.inputs[i])
            assert np.array_equal(stepped, henon_pool_small.outputs[i])

    def test_l63_pairs_are_consecutive_map_states(self, l63_pool_small):
        m = Lorenz63Map()
        idx = np.random.default_rng(2).choice(len(l63_pool_small), 10)
        for i in idx:
            stepped = m.apply(l63_pool_small.inputs[i])
            assert np.array_equal(stepped, l63_pool_small.outputs[i])

    def test_seed_determinism(self):
        a = generate_pool(HenonMap(), 4, 120, 100, [(-0.5, 0.5), (-0.5, 0.5)], 9)
        b = generate_pool(HenonMap(), 4, 120, 100, [(-0.5, 0.5), (-0.5, 0.5)], 9)
        c = generate_pool(HenonMap(), 4, 120, 100, [(-0.5, 0.5), (-0.5, 0.5)], 10)
        assert np.array_equal(a.inputs, b.inputs)
        assert np.array_equal(a.outputs, b.outputs)
        assert not np.array_equal(a.inputs, c.inputs)

    def test_jobs_invariance(self):
        args = (HenonMap(), 6, 150, 100, [(-0.5, 0.5), (-0.5, 0.5)], 33)
        serial = generate_pool(*args, jobs=1)
        threaded = generate_pool(*args, jobs=4)
        assert np.array_equal(serial.inputs, threaded.inputs)
        assert np.array_equal(serial.outputs, threaded.outputs)

    def test_diverged_ic_redrawn(self):
        # roughly one in ten draws from this box escapes to infinity
        pool = generate_pool(HenonMap(), 80, 120, 100,
                             [(0.8, 1.3), (-0.3, 0.3)], 4)
        assert len(pool) == 80 * 20
        assert pool.retries >= 1
        assert np.all(np.isfinite(pool.inputs))

    def test_hopeless_box_raises(self):
        with pytest.raises(PoolDivergenceError, match="10 consecutive"):
            generate_pool(HenonMap(), 3, 120, 100, [(30, 40), (30, 40)], 1)

    def test_default_pool_overrides(self):
        pool = default_pool("henon", 5, n_traj=3, n_steps=60, n_discard=50)
        assert len(pool) == 30
        assert pool.map_id == "henon"
        assert pool.seed == 5


class TestRegionFilter:
    def test_parse_single_clause(self):
        r = RegionFilter.parse("x>-5", 3)
        assert r.lo == (-5.0, -np.inf, -np.inf)
        assert r.hi == (np.inf, np.inf, np.inf)

    def test_parse_multiple_clauses(self):
        r = RegionFilter.parse("x>-5,z<40", 3)
        assert r.lo[0] == -5.0 and r.hi[2] == 40.0

    def test_bounds_are_strict(self):
        r = RegionFilter.parse("x>-5", 2)
        assert not r.mask(np.array([[-5.0, 0.0]]))[0]
        assert r.mask(np.array([[-4.999, 0.0]]))[0]

    def test_parse_errors(self):
        with pytest.raises(ValueError, match="cannot parse"):
            RegionFilter.parse("x>>3", 3)
        with pytest.raises(ValueError, match="unknown axis"):
            RegionFilter.parse("w>0", 3)
        with pytest.raises(ValueError, match="out of range"):
            RegionFilter.parse("z>0", 2)
        with pytest.raises(ValueError, match="empty region"):
            RegionFilter(lo=(1.0,), hi=(0.0,))

    @given(seed=st.integers(0, 2**32 - 1))
    def test_mask_matches_manual(self, seed):
        pts = np.random.default_rng(seed).uniform(-10, 10, size=(40, 2))
        r = RegionFilter.parse("x>-5,y<3", 2)
        manual = (pts[:, 0] > -5) & (pts[:, 1] < 3)
        assert np.array_equal(r.mask(pts), manual)

    def test_unbounded_accepts_everything(self):
        r = RegionFilter.unbounded(3)
        assert r.mask(np.array([[1e300, -1e300, 0.0]]))[0]


class TestSamplePairs:
    def test_without_replacement(self, henon_pool_small):
        x, y = sample_pairs(henon_pool_small, 500, seed=7)
        assert x.shape == (500, 2) and y.shape == (500, 2)
        assert np.unique(x, axis=0).shape[0] == 500

    def test_deterministic(self, henon_pool_small):
        a = sample_pairs(henon_pool_small, 40, seed=3)
        b = sample_pairs(henon_pool_small, 40, seed=3)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_filter_applies_to_inputs_only(self, henon_pool_small):
        region = RegionFilter.parse("x>0", 2)
        x, y = sample_pairs(henon_pool_small, 300, region, seed=11)
        assert np.all(x[:, 0] > 0)
        # outputs fall where the map sends them, filtered or not
        assert np.any(y[:, 0] <= 0)

    def test_pairs_stay_aligned(self, henon_pool_small):
        m = HenonMap()
        x, y = sample_pairs(henon_pool_small, 30, seed=5)
        for i in range(30):
            assert np.array_equal(m.apply(x[i]), y[i])

    def test_too_many_requested(self, henon_pool_small):
        with pytest.raises(InsufficientPairsError):
            sample_pairs(henon_pool_small, len(henon_pool_small) + 1)

    def test_filter_leaves_too_few(self, henon_pool_small):
        tiny = RegionFilter.parse("x>1.27", 2)
        with pytest.raises(InsufficientPairsError):
            sample_pairs(henon_pool_small, 1000, tiny)


class TestCloudAndPersistence:
    def test_attractor_cloud_unique_members(self, henon_pool_small):
        cloud = attractor_cloud(henon_pool_small)
        assert np.unique(cloud, axis=0).shape[0] == cloud.shape[0]
        # every cloud point appears among the pool inputs
        pool_set = {tuple(row) for row in henon_pool_small.inputs}
        assert all(tuple(row) in pool_set for row in cloud[:100])

    def test_save_load_round_trip(self, tmp_path, henon_pool_small):
        path = tmp_path / "pool.csv"
        save_pool(henon_pool_small, path)
        again = load_pool(path)
        assert np.array_equal(again.inputs, henon_pool_small.inputs)
        assert np.array_equal(again.outputs, henon_pool_small.outputs)
        assert again.map_id == "henon"
        assert again.seed == henon_pool_small.seed
        assert again.n_traj == henon_pool_small.n_traj
        assert np.array_equal(again.init_box, henon_pool_small.init_box)

    def test_csv_headers(self, tmp_path, henon_pool_small, l63_pool_small):
        p2 = tmp_path / "h.csv"
        p3 = tmp_path / "l.csv"
        save_pool(henon_pool_small, p2)
        save_pool(l63_pool_small, p3)
        assert p2.read_text().splitlines()[0] == "x,y,xp,yp"
        assert p3.read_text().splitlines()[0] == "x,y,z,xp,yp,zp"
        assert (tmp_path / "h.json").exists()

    def test_rerun_same_seed_byte_identical(self, tmp_path):
        paths = []
        for name in ("a.csv", "b.csv"):
            pool = generate_pool(HenonMap(), 3, 120, 100,
                                 [(-0.5, 0.5), (-0.5, 0.5)], 21)
            path = tmp_path / name
            save_pool(pool, path)
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestProtocolStatistics:
    """Distributional checks against the full-size Lorenz pool."""

    def test_filtered_fraction(self, assets):
        region = RegionFilter.parse("x>-5", 3)
        frac = region.mask(assets.l63_pool.inputs).mean()
        assert abs(frac - 0.73) < 0.03

    def test_cloud_mean_height(self, assets):
        cloud = attractor_cloud(assets.l63_pool)
        assert abs(cloud[:, 2].mean() - 23.55) < 0.5
