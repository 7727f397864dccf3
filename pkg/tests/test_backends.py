import math

import numpy as np
import pytest
import scipy.stats

from gaussradon import backends
from gaussradon.backends import purepy

ext = pytest.importorskip("gaussradon.backends._kernels") \
    if "ext" in backends.available() else None

needs_ext = pytest.mark.skipif(ext is None, reason="compiled backend not built")


class TestStreamContracts:
    def test_uniforms_strictly_inside_unit_interval(self):
        u = purepy.uniforms(3, 0, 100_000)
        assert u.min() > 0.0 and u.max() < 1.0

    def test_deterministic_per_index(self):
        assert np.array_equal(purepy.normals(5, 10, 50), purepy.normals(5, 10, 50))

    def test_chunking_is_invisible(self):
        whole = purepy.normals(7, 0, 100)
        parts = np.concatenate([purepy.normals(7, 0, 37), purepy.normals(7, 37, 63)])
        assert np.array_equal(whole, parts)

    def test_seeds_give_distinct_streams(self):
        assert not np.array_equal(purepy.normals(1, 0, 64), purepy.normals(2, 0, 64))

    def test_moments(self):
        n = purepy.normals(11, 0, 1_000_000)
        assert abs(n.mean()) <= 4.0 / math.sqrt(len(n))
        assert abs(n.var() - 1.0) <= 4.0 * math.sqrt(2.0 / len(n))

    def test_inverse_cdf_against_scipy(self):
        p = np.array([1e-12, 1e-6, 0.01, 0.3, 0.5, 0.75, 0.999, 1 - 1e-9])
        got = purepy._inv_normal_cdf(p.copy())
        want = scipy.stats.norm.ppf(p)
        assert np.max(np.abs(got - want)) <= 1e-9

    def test_span_moments_match_direct_evaluation(self):
        rng = np.random.default_rng(61)
        x = rng.normal(size=(500, 6))
        w = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
        d = rng.normal(size=3) + 1j * rng.normal(size=3)
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        s1, s2re, s2im, n = purepy.span_moments(x, w, d, c)
        f = np.exp(x @ w.T + d) @ c
        assert n == 500
        assert s1 == pytest.approx(f.sum(), rel=1e-12)
        assert s2re == pytest.approx((f.real**2).sum(), rel=1e-12)
        assert s2im == pytest.approx((f.imag**2).sum(), rel=1e-12)

    def test_empty_span(self):
        s1, s2re, s2im, n = purepy.span_moments(np.zeros((10, 2)),
                                                np.zeros((0, 2), dtype=complex),
                                                np.zeros(0, dtype=complex),
                                                np.zeros(0, dtype=complex))
        assert (s1, s2re, s2im, n) == (0j, 0.0, 0.0, 10)


@needs_ext
class TestCompiledTwin:
    def test_raw_stream_bit_identical(self):
        assert np.array_equal(ext.raw64(42, 0, 4096), purepy.raw64(42, 0, 4096))
        assert np.array_equal(ext.raw64(2**63, 10**6, 512), purepy.raw64(2**63, 10**6, 512))

    def test_uniforms_bit_identical(self):
        assert np.array_equal(ext.uniforms(42, 0, 100_000), purepy.uniforms(42, 0, 100_000))

    def test_normals_agree_to_rounding(self):
        # only libm's log may differ between the two implementations
        a = ext.normals(42, 0, 200_000)
        b = purepy.normals(42, 0, 200_000)
        assert np.max(np.abs(a - b)) <= 1e-9

    def test_span_moments_agree(self):
        rng = np.random.default_rng(62)
        x = rng.normal(size=(1000, 5))
        w = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        got = ext.span_moments(x, w, d, c)
        want = purepy.span_moments(x, w, d, c)
        assert got[0] == pytest.approx(want[0], rel=1e-10)
        assert got[1] == pytest.approx(want[1], rel=1e-10)
        assert got[2] == pytest.approx(want[2], rel=1e-10)
        assert got[3] == want[3]


class TestSelection:
    def test_switching_and_restoring(self):
        original = backends.active_name()
        try:
            assert backends.use("python") == "python"
            assert backends.active_name() == "python"
            if ext is not None:
                assert backends.use("ext") == "ext"
            backends.use("auto")
            assert backends.active_name() == ("ext" if ext is not None else "python")
        finally:
            backends.use(original)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError, match="backend"):
            backends.use("cuda")
