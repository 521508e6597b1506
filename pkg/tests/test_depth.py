"""Depth evaluators against hand values, brute-force oracles, and invariances."""

import numpy as np
import pytest
from scipy import stats as sps

from conftest import halfspace_2d_bruteforce, zonoid_feasibility_oracle
from depthgof.depth import (
    DepthKind,
    depth_profile,
    halfspace_depth_1d,
    halfspace_depth_2d_exact,
    halfspace_depth_approx,
    rank_transform,
    transform_from_depths,
    zonoid_depth,
)

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


class TestHandValues:
    def test_1d_point_values(self):
        ref = [1.0, 2.0, 3.0]
        assert halfspace_depth_1d(2.0, ref) == pytest.approx(2 / 3)
        assert halfspace_depth_1d(1.0, ref) == pytest.approx(1 / 3)
        assert halfspace_depth_1d(0.0, ref) == 0.0
        assert halfspace_depth_1d(4.0, ref) == 0.0

    def test_2d_square(self):
        assert halfspace_depth_2d_exact([0.5, 0.5], SQUARE) == pytest.approx(0.5)
        assert halfspace_depth_2d_exact([0.0, 0.0], SQUARE) == pytest.approx(0.25)
        assert halfspace_depth_2d_exact([2.0, 2.0], SQUARE) == 0.0

    def test_coincident_reference(self):
        ref = np.zeros((5, 2))
        assert halfspace_depth_2d_exact([0.0, 0.0], ref) == 1.0
        assert halfspace_depth_2d_exact([1.0, 0.0], ref) == 0.0

    def test_zonoid_point_values(self):
        ref = np.array([[0.0], [1.0]])
        assert zonoid_depth([0.25], ref) == pytest.approx(2 / 3)
        assert zonoid_depth([0.5], ref) == pytest.approx(1.0)
        assert zonoid_depth([1.5], ref) == 0.0
        assert zonoid_depth([0.6, 0.6], SQUARE) > 0.0

    def test_zonoid_maximal_at_mean(self):
        rng = np.random.default_rng(0)
        ref = rng.standard_normal((40, 3))
        assert zonoid_depth(ref.mean(axis=0), ref) == pytest.approx(1.0)


class TestOracles:
    @pytest.mark.parametrize("seed", range(10))
    def test_2d_exact_vs_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(10):
            n = int(rng.integers(3, 41))
            pts = rng.integers(-15, 16, size=(n, 2))
            queries = [pts[int(rng.integers(n))],
                       rng.integers(-15, 16, size=2),
                       rng.integers(20, 40, size=2)]
            for q in queries:
                mine = halfspace_depth_2d_exact(q.astype(float), pts.astype(float))
                assert mine == halfspace_2d_bruteforce(q, pts) / n

    @pytest.mark.parametrize("seed", range(5))
    def test_zonoid_vs_feasibility_bisection(self, seed):
        rng = np.random.default_rng(seed)
        for trial in range(4):
            n = int(rng.integers(5, 31))
            d = int(rng.integers(1, 4))
            pts = rng.standard_normal((n, d))
            if trial % 2:
                y = rng.dirichlet(np.ones(n)) @ pts
            else:
                y = pts.mean(axis=0) + rng.standard_normal(d) * 2.0
            assert zonoid_depth(y, pts) == pytest.approx(
                zonoid_feasibility_oracle(y, pts), abs=1e-6)


class TestProperties:
    def test_affine_invariance_halfspace(self):
        rng = np.random.default_rng(3)
        ref = rng.standard_normal((60, 2))
        queries = rng.standard_normal((10, 2)) * 1.5
        a = np.array([[2.0, 1.0], [-0.5, 1.5]])
        b = np.array([3.0, -7.0])
        before = depth_profile(queries, ref, DepthKind())
        after = depth_profile(queries @ a.T + b, ref @ a.T + b, DepthKind())
        assert np.array_equal(before, after)

    def test_affine_invariance_zonoid(self):
        rng = np.random.default_rng(4)
        ref = rng.standard_normal((25, 2))
        queries = rng.standard_normal((5, 2))
        a = np.array([[1.0, 2.0], [0.0, -1.0]])
        b = np.array([-1.0, 4.0])
        before = depth_profile(queries, ref, DepthKind(family="zonoid"))
        after = depth_profile(queries @ a.T + b, ref @ a.T + b,
                              DepthKind(family="zonoid"))
        assert np.allclose(before, after, atol=1e-7)

    def test_sample_points_have_positive_depth(self):
        rng = np.random.default_rng(5)
        ref = rng.standard_normal((30, 2))
        depths = depth_profile(ref, ref, DepthKind())
        assert np.all(depths >= 1 / 30 - 1e-15)
        assert np.all(np.abs(depths * 30 - np.round(depths * 30)) < 1e-9)

    def test_approx_upper_bounds_exact(self):
        rng = np.random.default_rng(6)
        for _ in range(15):
            ref = rng.standard_normal((40, 2))
            q = rng.standard_normal(2)
            exact = halfspace_depth_2d_exact(q, ref)
            approx = halfspace_depth_approx(q, ref, directions=200, seed=1)
            assert approx >= exact - 1e-15

    def test_approx_equals_exact_in_1d(self):
        rng = np.random.default_rng(7)
        ref = rng.standard_normal((50, 1))
        for q in rng.standard_normal(8):
            assert halfspace_depth_approx([q], ref, directions=5) == \
                halfspace_depth_1d(q, ref)

    def test_approx_deterministic_in_seed(self):
        rng = np.random.default_rng(8)
        ref = rng.standard_normal((30, 4))
        q = rng.standard_normal(4)
        a = halfspace_depth_approx(q, ref, directions=500, seed=3)
        b = halfspace_depth_approx(q, ref, directions=500, seed=3)
        c = halfspace_depth_approx(q, ref, directions=500, seed=4)
        assert a == b
        assert a != c or True  # seeds may rarely coincide; only determinism is asserted

    def test_zonoid_monotone_along_ray(self):
        rng = np.random.default_rng(9)
        ref = rng.standard_normal((30, 2))
        center = ref.mean(axis=0)
        direction = np.array([0.7, -0.3])
        depths = [zonoid_depth(center + t * direction, ref)
                  for t in np.linspace(0.0, 3.0, 12)]
        diffs = np.diff(depths)
        assert np.all(diffs <= 1e-7)

    def test_outside_hull_is_zero_both_families(self):
        rng = np.random.default_rng(10)
        ref = rng.standard_normal((25, 2))
        far = ref.max(axis=0) + 5.0
        assert halfspace_depth_2d_exact(far, ref) == 0.0
        assert zonoid_depth(far, ref) == 0.0
        assert halfspace_depth_approx(far, ref, directions=10) == 0.0

    def test_1d_depth_converges_to_normal_tail(self):
        rng = np.random.default_rng(11)
        ref = rng.standard_normal((200_000, 1))
        for x in (0.0, 0.8, -1.5):
            assert halfspace_depth_1d(x, ref) == pytest.approx(
                sps.norm.sf(abs(x)), abs=0.01)


class TestRankTransform:
    def test_values_are_multiples_of_inverse_ref_size(self):
        rng = np.random.default_rng(12)
        ref = rng.standard_normal((64, 2))
        data = rng.standard_normal((20, 2))
        g = rank_transform(data, ref, DepthKind())
        assert np.all((g >= 0) & (g <= 1))
        assert np.allclose(g * 64, np.round(g * 64))

    def test_monotone_in_depth(self):
        depths_ref = np.array([0.1, 0.2, 0.2, 0.4, 0.5])
        g = transform_from_depths(depths_ref, np.array([0.05, 0.2, 0.45, 0.6]))
        assert list(g) == [0.0, 0.6, 0.8, 1.0]

    def test_deepest_point_maps_to_one(self):
        rng = np.random.default_rng(13)
        ref = rng.standard_normal((50, 2))
        g = rank_transform(ref.mean(axis=0, keepdims=True), ref,
                           DepthKind(family="zonoid"))
        assert g[0] == 1.0

    def test_approx_shares_directions_between_ref_and_data(self):
        rng = np.random.default_rng(14)
        ref = rng.standard_normal((100, 3))
        kind = DepthKind(strategy="approx", directions=300)
        g = rank_transform(ref[:10], ref, kind)
        profile_ref = depth_profile(ref, ref, kind)
        profile_data = depth_profile(ref[:10], ref, kind)
        assert np.array_equal(g, transform_from_depths(profile_ref, profile_data))


class TestValidation:
    def test_exact_halfspace_rejects_high_dimension(self):
        kind = DepthKind()
        with pytest.raises(ValueError, match="d <= 2"):
            depth_profile(np.zeros((2, 3)), np.zeros((5, 3)) + np.eye(5, 3), kind)

    def test_zonoid_rejects_approx_strategy(self):
        with pytest.raises(ValueError, match="always exact"):
            DepthKind(family="zonoid", strategy="approx")

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown depth family"):
            DepthKind(family="simplicial")

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            depth_profile(np.zeros((2, 2)), np.zeros((4, 1)))

    def test_nonfinite_rejected(self):
        ref = np.array([[0.0], [np.nan]])
        with pytest.raises(ValueError, match="non-finite"):
            halfspace_depth_1d(0.0, ref)

    def test_labels(self):
        assert DepthKind().label() == "halfspace"
        assert DepthKind(family="zonoid").label() == "zonoid"
        assert DepthKind(strategy="approx", directions=77).label() == "halfspace~77"
