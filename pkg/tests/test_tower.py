import math

import numpy as np
import pytest

from gaussradon import (AffineSubspace, ComplexCoordVec, CoordVec, EigenSchedule,
                        complement_within, norm_p, pairing, project_affine)
from util import random_sparse, random_unit

e1 = CoordVec.unit(1)
e2 = CoordVec.unit(2)
e3 = CoordVec.unit(3)


class TestEigenSchedule:
    def test_default_rule_is_n_plus_1(self):
        sched = EigenSchedule()
        assert [sched(n) for n in (1, 2, 3, 10)] == [2.0, 3.0, 4.0, 11.0]

    def test_first_eigenvalue_must_exceed_one(self):
        with pytest.raises(ValueError):
            EigenSchedule(lambda n: float(n))  # lambda_1 = 1

    def test_strict_growth_enforced_on_prefix(self):
        with pytest.raises(ValueError):
            EigenSchedule(lambda n: 2.0)

    def test_linear_rule(self):
        sched = EigenSchedule.linear(0.5, 1.0)
        assert sched(1) == 1.5
        assert sched(4) == 3.0

    def test_index_must_be_positive(self):
        with pytest.raises(ValueError):
            EigenSchedule()(0)


class TestCoordVec:
    def test_zero_entries_dropped(self):
        x = CoordVec([(1, 0.0), (2, 1.0), (3, -0.0)])
        assert x.support == (2,)

    def test_duplicate_indices_merge(self):
        x = CoordVec([(1, 1.0), (1, -1.0), (2, 2.0)])
        assert x.entries == ((2, 2.0),)

    def test_indices_strictly_positive(self):
        with pytest.raises(ValueError):
            CoordVec([(0, 1.0)])
        with pytest.raises(ValueError):
            CoordVec([(-3, 1.0)])

    def test_real_only(self):
        with pytest.raises(ValueError):
            CoordVec([(1, 1 + 2j)])
        assert CoordVec([(1, complex(2.0, 0.0))])[1] == 2.0

    def test_arithmetic_and_promotion(self):
        x = e1 + 2 * e2
        assert x[1] == 1.0 and x[2] == 2.0
        assert (x - x).entries == ()
        z = 1j * x
        assert isinstance(z, ComplexCoordVec)
        assert z[2] == 2j
        assert isinstance(x + z, ComplexCoordVec)

    def test_numpy_scalars_multiply_cleanly(self):
        x = np.float64(2.0) * e1
        assert isinstance(x, CoordVec) and x[1] == 2.0

    def test_truncate_and_tail(self):
        x = e1 + 3 * e3
        assert x.truncate(2).entries == ((1, 1.0),)
        assert x.tail(2).entries == ((3, 3.0),)

    def test_dense_roundtrip(self):
        x = e1 + 3 * e3
        assert np.array_equal(x.to_dense(4), [1.0, 0.0, 3.0, 0.0])
        assert CoordVec.from_dense(x.to_dense(4)) == x

    def test_text_roundtrip(self):
        x = CoordVec([(1, 0.5), (3, -2.0)])
        assert x.to_text() == "1:0.5;3:-2"
        assert CoordVec.from_text(x.to_text()) == x
        assert CoordVec.from_text("") == CoordVec()
        w = ComplexCoordVec([(2, 1.5 - 0.25j)])
        assert ComplexCoordVec.from_text(w.to_text()) == w

    def test_text_errors(self):
        with pytest.raises(ValueError, match="index:value"):
            CoordVec.from_text("1=0.5")
        with pytest.raises(ValueError):
            CoordVec.from_text("x:0.5")


class TestNorms:
    def test_single_entry_with_default_schedule(self):
        assert norm_p(e2, 1) == 3.0

    def test_reciprocal_weight(self):
        assert norm_p(e2, -1) == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_euclidean_case(self):
        assert norm_p(e1 + e2, 0) == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_empty_vector(self):
        assert norm_p(CoordVec(), 3) == 0.0

    def test_monotone_in_p(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            x = random_sparse(rng)
            norms = [norm_p(x, p) for p in range(-3, 4)]
            for lo, hi in zip(norms, norms[1:]):
                assert lo <= hi * (1 + 1e-15)

    def test_duality_bound(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            x, y = random_sparse(rng), random_sparse(rng)
            for p in range(-3, 4):
                bound = norm_p(x, -p) * norm_p(y, p)
                assert abs(pairing(x, y)) <= bound * (1 + 1e-12)


class TestPairing:
    def test_orthonormality(self):
        assert pairing(e1, e1) == 1.0
        assert isinstance(pairing(e1, e1), float)

    def test_bilinear_not_sesquilinear(self):
        assert pairing(1j * e1, 1j * e1) == -1 + 0j

    def test_disjoint_support(self):
        assert pairing(e1, e2) == 0.0


class TestAffineSubspace:
    def test_hyperplane_normal_direction(self):
        sub = AffineSubspace.hyperplane(0.0, e1)
        y_v, y_perp = sub.project(e1)
        assert y_v == CoordVec() and y_perp == e1

    def test_hyperplane_tangent_direction(self):
        sub = AffineSubspace.hyperplane(0.0, e1)
        assert sub.project(e2) == (e2, CoordVec())

    def test_trailing_block_split(self):
        sub = AffineSubspace.trailing_span(2)
        assert sub.project(e1 + e3) == (e3, e1)

    def test_split_reassembles(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            v = random_unit(rng, 4)
            sub = AffineSubspace.hyperplane(float(rng.normal()), v)
            y = random_sparse(rng, max_index=7)
            y_v, y_perp = project_affine(y, sub)
            assert norm_p(y_v + y_perp - y, 0) <= 1e-14 * (1.0 + norm_p(y, 0))
            assert abs(pairing(y_v, y_perp)) < 1e-10

    def test_projection_idempotent(self):
        rng = np.random.default_rng(14)
        for _ in range(25):
            sub = AffineSubspace.hyperplane(0.0, random_unit(rng, 4))
            y_v, _ = sub.project(random_sparse(rng, max_index=6))
            again_v, again_perp = sub.project(y_v)
            assert norm_p(again_v - y_v, 0) < 1e-10
            assert norm_p(again_perp, 0) < 1e-10

    def test_unit_hyperplane_projector_invariants(self):
        rng = np.random.default_rng(15)
        v = random_unit(rng, 5)
        assert abs(pairing(v, v) - 1.0) <= 1e-12
        sub = AffineSubspace.hyperplane(1.0, v)  # constructor checks both
        p = sub.block_projector
        assert np.max(np.abs(p - p.T)) <= 1e-12
        assert np.max(np.abs(p @ p - p)) <= 1e-10

    def test_non_unit_normal_rejected(self):
        with pytest.raises(ValueError, match="unit"):
            AffineSubspace.hyperplane(0.0, 2 * e1)

    def test_invalid_projectors_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            AffineSubspace(CoordVec(), 2, np.array([[1.0, 0.5], [0.0, 1.0]]), True)
        with pytest.raises(ValueError, match="idempotent"):
            AffineSubspace(CoordVec(), 2, np.array([[0.5, 0.0], [0.0, 1.0]]), True)

    def test_anchor_must_fit_block(self):
        with pytest.raises(ValueError, match="anchor"):
            AffineSubspace(e3, 2, np.eye(2), True)

    def test_complement_of_leading_block_in_full_space(self):
        comp = complement_within(AffineSubspace.full(), AffineSubspace.leading_span(3))
        assert comp.tail_in
        assert comp.block_rank == 0
        assert comp.project(e2) == (CoordVec(), e2)

    def test_complement_rejects_non_contained(self):
        hyper = AffineSubspace.hyperplane(0.0, e1)
        normal_line = AffineSubspace.from_span([e1])
        with pytest.raises(ValueError, match="not contained"):
            complement_within(hyper, normal_line)

    def test_from_span_builds_projector(self):
        sub = AffineSubspace.from_span([e1 + e2])
        proj = sub.block_projector
        assert proj == pytest.approx(np.full((2, 2), 0.5), abs=1e-14)
