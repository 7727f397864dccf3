"""Gaussian measures on affine subspaces.

The measure mu_{a+V} is determined by its characteristic functional

    E[exp(i <x, y>)] = exp(i <a, y> - <y_V, y_V> / 2),

where y_V is the orthogonal projection of y onto V.  This module holds
the closed forms (characteristic functional, translation density, the
entire-function transform of the induced delta distribution), an exact
block sampler for the first coordinates, and a Monte Carlo estimator for
the mass of dual-norm balls under the background measure.

Sampling is counter-based with a coordinate-major stream layout: the
j-th normal column of sample i is derived from (seed, j * count + i),
columns being the block's latent normals followed by the tail
coordinates.  Results therefore depend only on (seed, count,
truncation_dim), never on chunking or thread schedule, and raising the
truncation only appends columns.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import backends
from .balls import DualBall
from .tower import (AffineSubspace, CoordVec, EigenSchedule, _as_schedule,
                    pairing)

__all__ = [
    "GaussianSampler",
    "char_fn",
    "translate_density",
    "s_transform_delta",
    "ball_mass_estimate",
    "CHUNK",
]

# Fixed reduction granularity for all Monte Carlo paths. Partial results
# are combined in chunk order, so totals are independent of thread count.
CHUNK = 1 << 16

_FACTOR_TOL = 1e-10


def char_fn(subspace: AffineSubspace, y: CoordVec) -> complex:
    """Characteristic functional of mu_{a+V} at the real probe vector y."""
    y_v, _ = subspace.project(y)
    return cmath.exp(1j * pairing(subspace.anchor, y) - 0.5 * pairing(y_v, y_v))


def translate_density(x: CoordVec, xi: CoordVec) -> float:
    """Density of the xi-translated background measure against itself.

    Satisfies E[phi(x + xi)] = E[phi(x) * translate_density(x, xi)] for
    integrable phi.
    """
    return math.exp(pairing(x, xi) - 0.5 * pairing(xi, xi))


def s_transform_delta(subspace: AffineSubspace, z) -> complex:
    """Entire-function transform of the delta distribution of a + V.

    Equals exp(<a, z> - <z_perp, z_perp> / 2) with z_perp the projection
    of z onto the orthogonal complement of V; the pairing is bilinear, so
    complex z is handled without conjugation.
    """
    z = z.as_complex() if isinstance(z, CoordVec) else z
    _, z_perp = subspace.project(z)
    return cmath.exp(pairing(subspace.anchor, z) - 0.5 * pairing(z_perp, z_perp))


def _canonical_factor(projector: np.ndarray) -> np.ndarray:
    """Rank-revealing symmetric square root of an orthogonal projector.

    Eigendecomposition with eigenvalues clamped at 1e-12; eigenvector
    signs are normalized (largest-magnitude component positive) so the
    factor is stable across platforms.
    """
    vals, vecs = np.linalg.eigh(projector)
    keep = vals > 1e-12
    cols = vecs[:, keep] * np.sqrt(vals[keep])
    for j in range(cols.shape[1]):
        lead = np.argmax(np.abs(cols[:, j]))
        if cols[lead, j] < 0:
            cols[:, j] = -cols[:, j]
    return cols


class GaussianSampler:
    """Exact sampler for the first coordinates of mu_{a+V}.

    Rows of the sample matrix are independent draws of the coordinates
    1..truncation_dim: the block part is anchor + factor @ g with g a
    standard normal vector of length rank(P), tail coordinates are
    independent standard normals when the tail lies in V and zero
    otherwise.
    """

    def __init__(self, subspace: AffineSubspace, truncation_dim: int, seed: int):
        if truncation_dim < subspace.block_dim:
            raise ValueError(
                f"truncation_dim {truncation_dim} is smaller than the "
                f"subspace block {subspace.block_dim}")
        self.subspace = subspace
        self.truncation_dim = int(truncation_dim)
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.factor = _canonical_factor(subspace.block_projector)
        err = np.max(np.abs(self.factor @ self.factor.T - subspace.block_projector),
                     initial=0.0)
        if err > _FACTOR_TOL:
            raise ValueError(f"projector factorization residual {err:.2e} exceeds 1e-10")
        self._rank = self.factor.shape[1]
        self._anchor_dense = subspace.anchor.to_dense(self.truncation_dim)

    def chunk(self, start: int, stop: int, count: int) -> np.ndarray:
        """Rows start..stop-1 of the `count`-row sample matrix."""
        n = stop - start
        m = self.subspace.block_dim
        t = self.truncation_dim
        x = np.tile(self._anchor_dense, (n, 1))
        if self._rank:
            g = np.empty((n, self._rank))
            for j in range(self._rank):
                g[:, j] = backends.normals(self.seed, j * count + start, n)
            x[:, :m] += g @ self.factor.T
        if self.subspace.tail_in:
            for j in range(t - m):
                x[:, m + j] = backends.normals(
                    self.seed, (self._rank + j) * count + start, n)
        return x

    def sample_block(self, count: int, threads: int = 1) -> np.ndarray:
        """The full count x truncation_dim sample matrix."""
        if count < 1:
            raise ValueError("count must be >= 1")
        out = np.empty((count, self.truncation_dim))
        spans = _chunk_spans(count)

        def fill(span):
            out[span[0]:span[1]] = self.chunk(span[0], span[1], count)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(fill, spans))
        else:
            for span in spans:
                fill(span)
        return out


def _chunk_spans(count: int) -> list[tuple[int, int]]:
    return [(s, min(s + CHUNK, count)) for s in range(0, count, CHUNK)]


def reduce_moment_chunks(count: int, threads: int, work):
    """Run work(start, stop) over fixed chunks and combine in chunk order.

    `work` returns (s1, s2re, s2im, n) partials; the combination order is
    fixed by chunk index, so the result is identical for any thread count.
    Returns (mean, standard error, count).
    """
    spans = _chunk_spans(count)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda sp: work(sp[0], sp[1]), spans))
    else:
        partials = [work(s, e) for s, e in spans]
    s1 = 0j
    s2re = s2im = 0.0
    n = 0
    for p1, p2re, p2im, pn in partials:
        s1 += p1
        s2re += p2re
        s2im += p2im
        n += pn
    mean = s1 / n
    if n > 1:
        var_re = max(s2re - n * mean.real**2, 0.0) / (n - 1)
        var_im = max(s2im - n * mean.imag**2, 0.0) / (n - 1)
        stderr = math.sqrt((var_re + var_im) / n)
    else:
        stderr = 0.0
    return mean, stderr, n


def ball_mass_estimate(ball: DualBall, truncation_dim: int, count: int, seed: int,
                       schedule: EigenSchedule | None = None,
                       threads: int = 1) -> tuple[float, float]:
    """Monte Carlo mass of a dual ball under the background measure.

    Membership is decided on the partial sum over the first
    truncation_dim coordinates.  That set contains the true ball, so the
    estimate is an upper bound that is nonincreasing in truncation_dim
    (exactly so for a fixed seed, since raising the truncation reuses the
    same coordinate streams and only adds nonnegative terms).

    Returns (estimate, standard error).
    """
    if truncation_dim < ball.center.max_index:
        raise ValueError("truncation_dim must cover the ball center's support")
    if count < 1:
        raise ValueError("count must be >= 1")
    sched = _as_schedule(schedule)
    t = truncation_dim
    weights = sched.weights(range(1, t + 1), -ball.p)
    center = ball.center.to_dense(t)
    r2 = ball.radius**2
    sampler = GaussianSampler(AffineSubspace.full(), t, seed)

    def work(start, stop):
        x = sampler.chunk(start, stop, count)
        s = ((x - center) ** 2) @ weights
        hits = int(np.count_nonzero(s <= r2))
        # indicator moments: sum f = sum f^2 = hit count
        return complex(hits), float(hits), 0.0, stop - start

    mean, _, n = reduce_moment_chunks(count, threads, work)
    est = mean.real  # total hits / n
    stderr = math.sqrt(max(est * (1.0 - est), 0.0) / n)
    return est, stderr
