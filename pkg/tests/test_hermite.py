import math

import numpy as np
import pytest

from gaussradon import CoordVec, HermiteBasis, norm_p


@pytest.fixture(scope="module")
def basis():
    return HermiteBasis(max_index=12)


def lebesgue_oracle(nodes):
    """Independent plain-line quadrature rule from the textbook weights."""
    t, w = np.polynomial.hermite_e.hermegauss(nodes)
    return t, w * np.exp(0.5 * t * t)


class TestEigenfunctions:
    def test_unit_norm_by_quadrature_oracle(self, basis):
        t, w = lebesgue_oracle(200)
        assert (basis.eval(1, t) ** 2) @ w == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality(self, basis):
        t, w = lebesgue_oracle(200)
        assert (basis.eval(1, t) * basis.eval(2, t)) @ w == pytest.approx(0.0, abs=1e-8)

    def test_quadrature_orthonormality_invariant(self, basis):
        # Gram defect under a rule with >= 4 * max_index nodes
        assert basis.orthonormality_defect() <= 1e-8

    def test_finite_difference_eigen_residual(self, basis):
        h = 1e-3
        t = np.linspace(-5.0, 5.0, 2001)
        phi = lambda s: basis.eval(1, s)
        second = (phi(t + h) - 2.0 * phi(t) + phi(t - h)) / h**2
        residual = -second + (t**2 / 4.0 + 0.5) * phi(t) - 2.0 * phi(t)
        assert np.max(np.abs(residual)) <= 1e-5

    def test_rayleigh_quotients_match_schedule(self, basis):
        # central differences on a fine grid; eigenvalue of index n is n + 1
        h = 1e-3
        t = np.arange(-10.0, 10.0 + h / 2, h)
        for n in range(1, 9):
            f = basis.eval(n, t)
            second = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h**2
            af = -second + (t[1:-1] ** 2 / 4.0 + 0.5) * f[1:-1]
            rayleigh = np.trapezoid(f[1:-1] * af, t[1:-1]) / np.trapezoid(f[1:-1] ** 2, t[1:-1])
            assert rayleigh == pytest.approx(n + 1, abs=1e-4)

    def test_scalar_and_array_evaluation_agree(self, basis):
        assert basis.eval(3, 0.7) == basis.eval(3, np.array([0.7]))[0]

    def test_index_out_of_range(self, basis):
        with pytest.raises(IndexError):
            basis.eval(0, 0.0)
        with pytest.raises(IndexError):
            basis.eval(13, 0.0)


class TestSynth:
    def test_zero_vector(self, basis):
        assert np.all(basis.synth(CoordVec(), np.linspace(-2, 2, 9)) == 0.0)

    def test_single_basis_function(self, basis):
        t = 0.37
        assert basis.synth(CoordVec.unit(1), [t])[0] == pytest.approx(
            basis.eval(1, t), rel=1e-15)

    def test_two_term_norm_via_quadrature(self, basis):
        x = CoordVec.unit(1) + CoordVec.unit(2)
        t, w = basis.lebesgue_rule()
        f = basis.synth(x, t)
        assert math.sqrt((f * f) @ w) == pytest.approx(math.sqrt(2.0), abs=1e-6)

    def test_parseval_at_truncation(self, basis):
        rng = np.random.default_rng(21)
        t, w = basis.lebesgue_rule()
        for _ in range(10):
            x = CoordVec((i, float(rng.normal())) for i in range(1, 11))
            f = basis.synth(x, t)
            assert math.sqrt((f * f) @ w) == pytest.approx(norm_p(x, 0), abs=1e-6)

    def test_support_must_fit(self, basis):
        with pytest.raises(IndexError):
            basis.synth(CoordVec.unit(13), [0.0])


class TestConstruction:
    def test_build_rule_must_be_large_enough(self):
        with pytest.raises(ValueError):
            HermiteBasis(max_index=12, build_nodes=24)

    def test_oversized_rule_rejected(self):
        with pytest.raises(ValueError, match="256"):
            HermiteBasis(max_index=96)

    def test_quadrature_fixed_normalization_holds_off_the_build_rule(self):
        basis = HermiteBasis(max_index=24)
        t, w = lebesgue_oracle(128)  # different rule than the build's 96 nodes
        for n in (1, 5, 12, 24):
            assert (basis.eval(n, t) ** 2) @ w == pytest.approx(1.0, abs=1e-9)
