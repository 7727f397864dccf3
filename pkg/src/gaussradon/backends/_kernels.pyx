# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in gaussradon.backends.purepy.

Same counter-based stream, same inverse-normal coefficients, same
floating-point operation order (the build disables FP contraction), so
the integer path is bit-identical to the fallback and the real paths
agree except possibly in the last ulps of libm's log.
"""

from libc.math cimport cos, exp, log, sin, sqrt
from libc.stdint cimport uint64_t

import numpy as np


cdef inline uint64_t _mix(uint64_t x) nogil:
    x = (x ^ (x >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <uint64_t>0x94D049BB133111EB
    return x ^ (x >> 31)


cdef inline double _uniform(uint64_t seed, uint64_t idx) nogil:
    cdef uint64_t x = _mix(seed + (idx + 1) * <uint64_t>0x9E3779B97F4A7C15)
    return (<double>(x >> 11) + 0.5) * (1.0 / 9007199254740992.0)


cdef inline double _inv_normal_cdf(double p) nogil:
    cdef double q = p - 0.5
    cdef double r, num, den, val
    if q <= 0.425 and q >= -0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    if q < 0.0:
        r = p
    else:
        r = 1.0 - p
    r = sqrt(-log(r))
    if r <= 5.0:
        r = r - 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                    + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                  + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                    + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                  + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                + 2.05319162663775882187e0) * r + 1.0)
        val = num / den
    else:
        r = r - 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                  + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                    + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                  + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
        val = num / den
    if q < 0.0:
        return -val
    return val


def raw64(seed, start, count):
    """uint64 stream words start .. start+count-1 of the given seed."""
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base = <uint64_t>start
    cdef Py_ssize_t n = count, i
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    with nogil:
        for i in range(n):
            view[i] = _mix(s + (base + <uint64_t>i + 1) * <uint64_t>0x9E3779B97F4A7C15)
    return out


def uniforms(seed, start, count):
    """Uniform doubles strictly inside (0, 1), one per stream index."""
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base = <uint64_t>start
    cdef Py_ssize_t n = count, i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    with nogil:
        for i in range(n):
            view[i] = _uniform(s, base + <uint64_t>i)
    return out


def normals(seed, start, count):
    """Standard normal draws, one per stream index, via the inverse CDF."""
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base = <uint64_t>start
    cdef Py_ssize_t n = count, i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    with nogil:
        for i in range(n):
            view[i] = _inv_normal_cdf(_uniform(s, base + <uint64_t>i))
    return out


def span_moments(x, w, d, c):
    """Fused accumulation of f_i = sum_k c_k exp(<x_i, w_k> + d_k).

    Same contract as the numpy twin: returns (sum f, sum Re(f)^2,
    sum Im(f)^2, n) over the sample rows of x.
    """
    xa = np.ascontiguousarray(x, dtype=np.float64)
    wa = np.asarray(w, dtype=np.complex128)
    da = np.asarray(d, dtype=np.complex128)
    ca = np.asarray(c, dtype=np.complex128)
    cdef Py_ssize_t n = xa.shape[0]
    if wa.shape[0] == 0:
        return 0j, 0.0, 0.0, n
    wre = np.ascontiguousarray(wa.real)
    wim = np.ascontiguousarray(wa.imag)
    dre = np.ascontiguousarray(da.real)
    dim = np.ascontiguousarray(da.imag)
    cre = np.ascontiguousarray(ca.real)
    cim = np.ascontiguousarray(ca.imag)

    cdef double[:, ::1] xv = xa
    cdef double[:, ::1] wrev = wre
    cdef double[:, ::1] wimv = wim
    cdef double[::1] drev = dre
    cdef double[::1] dimv = dim
    cdef double[::1] crev = cre
    cdef double[::1] cimv = cim
    cdef Py_ssize_t kk = wrev.shape[0], t = wrev.shape[1], i, k, j
    cdef double tre, tim, mag, ere, eim, fre, fim, xij
    cdef double s1re = 0.0, s1im = 0.0, s2re = 0.0, s2im = 0.0

    with nogil:
        for i in range(n):
            fre = 0.0
            fim = 0.0
            for k in range(kk):
                tre = drev[k]
                tim = dimv[k]
                for j in range(t):
                    xij = xv[i, j]
                    tre += xij * wrev[k, j]
                    tim += xij * wimv[k, j]
                mag = exp(tre)
                ere = mag * cos(tim)
                eim = mag * sin(tim)
                fre += crev[k] * ere - cimv[k] * eim
                fim += crev[k] * eim + cimv[k] * ere
            s1re += fre
            s1im += fim
            s2re += fre * fre
            s2im += fim * fim
    return complex(s1re, s1im), s2re, s2im, <object>n
