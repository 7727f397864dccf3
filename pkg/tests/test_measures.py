import cmath
import math

import numpy as np
import pytest

from gaussradon import (AffineSubspace, ComplexCoordVec, CoordVec, DualBall,
                        GaussianSampler, ball_mass_estimate, char_fn, norm_p,
                        s_transform_delta, translate_density)
from gaussradon.transform import gauss_hermite_rule
from util import random_complex_sparse, random_sparse, random_unit

e1 = CoordVec.unit(1)
e2 = CoordVec.unit(2)


class TestCharFn:
    def test_normal_direction_kills_quadratic_term(self):
        sub = AffineSubspace.hyperplane(0.0, e1)
        assert char_fn(sub, e1) == 1.0

    def test_tangent_unit_vector(self):
        sub = AffineSubspace.hyperplane(0.0, e1)
        assert char_fn(sub, e2) == pytest.approx(math.exp(-0.5), rel=1e-15)

    def test_anchor_only_phase(self):
        sub = AffineSubspace.trailing_span(1).with_anchor(2 * e1)
        assert char_fn(sub, e1) == pytest.approx(cmath.exp(2j), rel=1e-15)

    def test_normalized_and_bounded(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            sub = AffineSubspace.hyperplane(float(rng.normal()), random_unit(rng, 4))
            assert char_fn(sub, CoordVec()) == 1.0
            assert abs(char_fn(sub, random_sparse(rng, max_index=6))) <= 1.0 + 1e-15


class TestSampler:
    def test_hyperplane_mean_and_covariance(self):
        # 1e6 draws from the offset-2 hyperplane; compare block statistics
        # against the anchor and projector at four standard errors
        sub = AffineSubspace.hyperplane(2.0, e1)
        x = GaussianSampler(sub, 4, seed=101).sample_block(1_000_000)
        n = x.shape[0]
        mean = x.mean(axis=0)
        se_mean = x.std(axis=0, ddof=1) / math.sqrt(n)
        anchor = np.array([2.0, 0.0, 0.0, 0.0])
        assert np.all(np.abs(mean - anchor) <= 4.0 * np.maximum(se_mean, 1e-300))
        centered = x - anchor
        target = np.zeros((4, 4))
        target[1:, 1:] = np.eye(3)  # I - v v^T on the block, unit tail
        for i in range(4):
            for j in range(4):
                prods = centered[:, i] * centered[:, j]
                se = prods.std(ddof=1) / math.sqrt(n)
                assert abs(prods.mean() - target[i, j]) <= 4.0 * max(se, 1e-300)

    def test_point_mass(self):
        anchor = 1.5 * e1 + 0.5 * e2
        sampler = GaussianSampler(AffineSubspace.point(anchor), 3, seed=7)
        x = sampler.sample_block(100)
        assert np.array_equal(x, np.tile(anchor.to_dense(3), (100, 1)))

    def test_factor_reproduces_projector(self):
        rng = np.random.default_rng(32)
        sub = AffineSubspace.hyperplane(0.0, random_unit(rng, 5))
        sampler = GaussianSampler(sub, 6, seed=1)
        residual = sampler.factor @ sampler.factor.T - sub.block_projector
        assert np.max(np.abs(residual)) <= 1e-10

    def test_truncation_must_cover_block(self):
        with pytest.raises(ValueError):
            GaussianSampler(AffineSubspace.hyperplane(0.0, CoordVec.unit(3)), 2, seed=1)

    def test_deterministic_and_thread_invariant(self):
        sub = AffineSubspace.hyperplane(1.0, e1)
        a = GaussianSampler(sub, 5, seed=9).sample_block(70_000)
        b = GaussianSampler(sub, 5, seed=9).sample_block(70_000, threads=4)
        assert np.array_equal(a, b)

    def test_raising_truncation_appends_columns(self):
        sub = AffineSubspace.hyperplane(1.0, e1)
        narrow = GaussianSampler(sub, 3, seed=9).sample_block(1000)
        wide = GaussianSampler(sub, 5, seed=9).sample_block(1000)
        assert np.array_equal(wide[:, :3], narrow)

    def test_empirical_characteristic_functional(self):
        # sample mean of exp(i <x, y>) against the closed form, hyperplane
        # and block-plus-tail cases
        rng = np.random.default_rng(33)
        subs = [
            AffineSubspace.hyperplane(0.7, random_unit(rng, 3)),
            AffineSubspace.from_span([random_unit(rng, 3)], block_dim=3,
                                     tail_in=True, anchor=random_sparse(rng, 3)),
        ]
        for sub in subs:
            x = GaussianSampler(sub, 5, seed=202).sample_block(200_000)
            for _ in range(5):
                y = CoordVec.from_dense(rng.uniform(-1.0, 1.0, 5))
                phases = np.exp(1j * (x @ y.to_dense(5)))
                mean = phases.mean()
                se = math.hypot(phases.real.std(ddof=1), phases.imag.std(ddof=1)) \
                    / math.sqrt(len(phases))
                assert abs(mean - char_fn(sub, y)) <= 4.0 * se


class TestTranslateDensity:
    def test_plug_in_values(self):
        assert translate_density(CoordVec(), e1) == pytest.approx(math.exp(-0.5), rel=1e-15)
        assert translate_density(e1, e1) == pytest.approx(math.exp(0.5), rel=1e-15)

    def test_monte_carlo_change_of_variables(self):
        # E[phi(x + xi)] = E[phi(x) * density(x, xi)] for phi = c_{e1}, xi = e2;
        # coupled samples, so the gate is on the standard error of the gap
        x = GaussianSampler(AffineSubspace.full(), 2, seed=55).sample_block(1_000_000)
        xi = np.array([0.0, 1.0])
        phi = lambda pts: np.exp(pts[:, 0] - 0.5)
        gap = phi(x + xi) - phi(x) * np.exp(x @ xi - 0.5 * xi @ xi)
        se = gap.std(ddof=1) / math.sqrt(len(gap))
        assert abs(gap.mean()) <= 4.0 * se


class TestSTransformDelta:
    # the closed form projects onto the orthogonal complement of V, so the
    # normal component of z is the one that survives in the quadratic term

    def test_normal_direction(self):
        sub = AffineSubspace.hyperplane(1.0, e1)
        assert s_transform_delta(sub, e1) == pytest.approx(math.exp(0.5), rel=1e-14)

    def test_complex_normal_direction(self):
        sub = AffineSubspace.hyperplane(1.0, e1)
        want = cmath.exp(0.5 + 1j)  # bilinear pairing gives -1 in the square
        assert s_transform_delta(sub, 1j * e1) == pytest.approx(want, rel=1e-14)

    def test_tangent_direction(self):
        sub = AffineSubspace.hyperplane(1.0, e1)
        assert s_transform_delta(sub, e2) == pytest.approx(1.0, rel=1e-14)

    def test_against_direct_integration_oracle(self):
        # the offset-1 hyperplane with normal e1 pins x1 = 1 and leaves x2
        # standard normal; integrate c_z over that product measure directly
        t, w = gauss_hermite_rule(80)
        sub = AffineSubspace.hyperplane(1.0, e1)
        rng = np.random.default_rng(34)
        for _ in range(10):
            z1, z2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            z = ComplexCoordVec([(1, z1), (2, z2)])
            values = np.exp(z1 * 1.0 + z2 * t - 0.5 * (z1 * z1 + z2 * z2))
            oracle = values @ w
            assert s_transform_delta(sub, z) == pytest.approx(oracle, rel=1e-12)

    def test_growth_bound(self):
        # |transform| <= exp(|a|_{-p}^2 / 2) exp(3 |z|_p^2 / 2); compared in
        # log space because the right side easily overflows for p = 2
        rng = np.random.default_rng(35)
        for _ in range(50):
            sub = AffineSubspace.hyperplane(float(rng.normal()), random_unit(rng, 4))
            z = random_complex_sparse(rng, max_index=6)
            for p in (1, 2):
                log_bound = 0.5 * norm_p(sub.anchor, -p) ** 2 + 1.5 * norm_p(z, p) ** 2
                value = abs(s_transform_delta(sub, z))
                assert math.log(value) <= log_bound + 1e-12


class TestBallMass:
    def test_one_dimensional_truncation_matches_normal_cdf(self):
        ball = DualBall(1, CoordVec(), 1.0)
        est, se = ball_mass_estimate(ball, 1, 1_000_000, seed=71)
        exact = math.erf(2.0 / math.sqrt(2.0))  # P(|Z| <= lambda_1 r) with lambda_1 = 2
        assert abs(est - exact) <= 4.0 * se

    def test_huge_radius_is_certain(self):
        ball = DualBall(1, CoordVec(), 1e6)
        est, se = ball_mass_estimate(ball, 3, 10_000, seed=72)
        assert est == 1.0 and se == 0.0

    def test_positive_at_deep_truncation(self):
        ball = DualBall(1, CoordVec(), 1.0)
        est, se = ball_mass_estimate(ball, 50, 200_000, seed=73)
        assert est - 4.0 * se > 0.0

    def test_monotone_in_radius(self):
        estimates = [ball_mass_estimate(DualBall(1, CoordVec(), r), 10, 50_000, seed=74)[0]
                     for r in (0.25, 0.5, 1.0, 2.0)]
        assert estimates == sorted(estimates)

    def test_monotone_in_truncation(self):
        ball = DualBall(1, CoordVec(), 1.0)
        estimates = [ball_mass_estimate(ball, t, 50_000, seed=75)[0]
                     for t in (1, 5, 20, 50)]
        assert estimates == sorted(estimates, reverse=True)

    def test_center_support_must_fit(self):
        with pytest.raises(ValueError):
            ball_mass_estimate(DualBall(1, CoordVec.unit(5), 1.0), 3, 100, seed=1)

    def test_thread_count_does_not_change_estimate(self):
        ball = DualBall(1, CoordVec(), 1.0)
        a = ball_mass_estimate(ball, 8, 150_000, seed=76, threads=1)
        b = ball_mass_estimate(ball, 8, 150_000, seed=76, threads=4)
        assert a == b
