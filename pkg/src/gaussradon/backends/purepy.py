"""Numpy implementations of the hot kernels.

The compiled module (gaussradon.backends._kernels) implements the same
three functions with identical stream layout and, for the integer paths,
bit-identical output.  Keep the two in lockstep: same mixing constants,
same inverse-normal coefficients, same Horner ordering.

The generator is counter-based: output k of stream `seed` is a pure
function of (seed, k), so any chunking or thread schedule that asks for
the same global indices gets the same values.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2**-53

# Rational minimax coefficients for the inverse standard-normal CDF
# (Wichura's double-precision algorithm), accurate to ~1e-16.
_A = (3.3871328727963666080e0, 1.3314166789178437745e2,
      1.9715909503065514427e3, 1.3731693765509461125e4,
      4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3, 2.1213794301586595867e4,
      3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0,
      5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1,
      1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0,
      1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4,
      1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coeffs, r):
    acc = np.full_like(r, coeffs[7])
    for c in coeffs[6::-1]:
        acc = acc * r + c
    return acc


def _mix(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def raw64(seed: int, start: int, count: int) -> np.ndarray:
    """uint64 stream words start .. start+count-1 of the given seed."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    return _mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * _GOLDEN)


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles strictly inside (0, 1), one per stream index."""
    bits = raw64(seed, start, count) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * _U53


def _inv_normal_cdf(p: np.ndarray) -> np.ndarray:
    q = p - 0.5
    r = 0.180625 - q * q
    out = q * _poly(_A, r) / _poly(_B, r)
    tails = np.flatnonzero(np.abs(q) > 0.425)
    if tails.size:
        pt = p[tails]
        qt = q[tails]
        s = np.sqrt(-np.log(np.where(qt < 0.0, pt, 1.0 - pt)))
        mid = s <= 5.0
        rm = s - 1.6
        rf = s - 5.0
        val = np.where(mid, _poly(_C, rm) / _poly(_D, rm), _poly(_E, rf) / _poly(_F, rf))
        out[tails] = np.where(qt < 0.0, -val, val)
    return out


def normals(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws, one per stream index, via the inverse CDF."""
    return _inv_normal_cdf(uniforms(seed, start, count))


def span_moments(x: np.ndarray, w: np.ndarray, d: np.ndarray, c: np.ndarray):
    """Accumulate f_i = sum_k c_k exp(<x_i, w_k> + d_k) over sample rows.

    x is (n, T) real, w is (K, T) complex, d and c are (K,) complex.
    Returns (sum f_i, sum Re(f_i)^2, sum Im(f_i)^2, n); callers combine
    these partials across chunks to get the mean and its standard error.
    """
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.complex128)
    d = np.asarray(d, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    n = x.shape[0]
    if w.shape[0] == 0:
        return 0j, 0.0, 0.0, n
    z = x @ w.real.T + 1j * (x @ w.imag.T)
    f = np.exp(z + d) @ c
    fr, fi = f.real, f.imag
    return complex(f.sum()), float(fr @ fr), float(fi @ fi), n
