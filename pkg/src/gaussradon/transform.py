"""The hyperplane transform of test functions, by three routes.

For a span of renormalized exponentials the integral against mu_{a+V}
has the closed form

    G_{c_w}(a + V) = exp(<a, w> - <w_perp, w_perp> / 2),

which for a hyperplane alpha*v + v_perp reduces to
exp(alpha <v, w> - <w, v>^2 / 2).  The Monte Carlo route averages the
function over exact block samples, and the finite-dimensional quadrature
route integrates a cylindrical function over the corresponding hyperplane
in R^n with a product Gauss-Hermite rule.  The three routes are kept
deliberately independent so they can check each other.

Also here: the nested-integral split across an orthogonal decomposition
V = S (+) S_perp_within_V, and the truncation-tower values

    f_n(x) = sum_k c_k exp(<x_n, w_k> - <w_k, w_k>/2 + <w_k tail, w_k tail>/2)

which stabilize exactly to the pointwise value once n covers every
support involved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backends
from .functionals import ExponentialFunctional
from .measures import GaussianSampler, reduce_moment_chunks, s_transform_delta
from .tower import AffineSubspace, CoordVec, complement_within, pairing

__all__ = [
    "TransformResult",
    "QuadratureSpec",
    "radon_closed",
    "radon_mc",
    "radon_rn_quadrature",
    "disintegrate_eval",
    "f_n_eval",
    "gauss_hermite_rule",
]

MAX_QUAD_DIMS = 6
_QUAD_BLOCK = 1 << 16


@dataclass(frozen=True)
class TransformResult:
    """One transform value with its provenance.

    stderr is 0 for the closed route; for the Monte Carlo route it is the
    standard error of the mean (componentwise variances of the complex
    integrand, combined), and for quadrature a coarse estimate from
    comparing rules of adjacent node counts (both may degenerate to 0 for
    constant integrands).
    """

    value: complex
    stderr: float
    method: str
    samples_or_nodes: int


@dataclass(frozen=True)
class QuadratureSpec:
    """Product Gauss-Hermite rule against the standard normal weight."""

    nodes_per_dim: int = 40

    def __post_init__(self):
        if self.nodes_per_dim < 1:
            raise ValueError("nodes_per_dim must be >= 1")


@lru_cache(maxsize=64)
def gauss_hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrating against exp(-t^2/2)/sqrt(2 pi).

    Built by the Golub-Welsch eigendecomposition of the Jacobi matrix
    (off-diagonals sqrt(k)), which stays stable for large rules where the
    textbook weight formulas overflow.  Weights are normalized to sum to 1
    (the rule integrates the constant exactly up to rounding) and are all
    positive down to underflow at the extreme nodes.
    """
    if n == 1:
        return np.zeros(1), np.ones(1)
    jacobi = np.zeros((n, n))
    off = np.sqrt(np.arange(1, n, dtype=float))
    jacobi[range(n - 1), range(1, n)] = off
    jacobi[range(1, n), range(n - 1)] = off
    nodes, vecs = np.linalg.eigh(jacobi)
    weights = vecs[0] ** 2
    weights = weights / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def radon_closed(phi: ExponentialFunctional, subspace: AffineSubspace) -> TransformResult:
    """Exact transform of an exponential span over a + V."""
    value = 0j
    for coeff, w in phi.terms:
        value += coeff * s_transform_delta(subspace, w)
    return TransformResult(value, 0.0, "closed", 0)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def radon_mc(phi: ExponentialFunctional, subspace: AffineSubspace,
             truncation_dim: int, count: int, seed: int,
             threads: int = 1) -> TransformResult:
    """Sample mean of phi over exact draws from mu_{a+V}.

    truncation_dim must cover both the subspace block and every exponent
    support, so that the untouched tail coordinates cannot change the
    integrand.
    """
    if truncation_dim < phi.max_index:
        raise ValueError(
            f"truncation_dim {truncation_dim} does not cover the functional "
            f"support (max index {phi.max_index})")
    sampler = GaussianSampler(subspace, truncation_dim, seed)
    w, d, c = phi.dense_arrays(truncation_dim)

    def work(start, stop):
        x = sampler.chunk(start, stop, count)
        return backends.span_moments(x, w, d, c)

    mean, stderr, n = reduce_moment_chunks(count, threads, work)
    return TransformResult(mean, stderr, "mc", n)


# ---------------------------------------------------------------------------
# finite-dimensional quadrature
# ---------------------------------------------------------------------------

def _householder_completion(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane through the unit vector v.

    Columns 2..n of the Householder reflection mapping e_1 -> v; the
    construction is deterministic and numerically stable.
    """
    n = v.shape[0]
    u = v - np.eye(n)[:, 0]
    uu = float(u @ u)
    h = np.eye(n)
    if uu > 1e-28:
        h -= 2.0 * np.outer(u, u) / uu
    return h[:, 1:]


def _product_rule_sum(f, base: np.ndarray, axes: np.ndarray, nodes: np.ndarray,
                      weights: np.ndarray, ndim: int) -> complex:
    """sum over the product grid of weights * f(base + t . axes), blockwise."""
    shape = (len(nodes),) * ndim
    total_nodes = len(nodes) ** ndim
    total = 0j
    for start in range(0, total_nodes, _QUAD_BLOCK):
        ids = np.arange(start, min(start + _QUAD_BLOCK, total_nodes))
        digits = np.unravel_index(ids, shape)
        t = np.stack([nodes[dig] for dig in digits], axis=1)
        wprod = np.ones(len(ids))
        for dig in digits:
            wprod *= weights[dig]
        values = np.asarray(f(base + t @ axes.T), dtype=complex)
        total += complex(values @ wprod)
    return total


def radon_rn_quadrature(f, alpha: float, v: np.ndarray,
                        spec: QuadratureSpec = QuadratureSpec()) -> TransformResult:
    """Gaussian integral of f over the hyperplane alpha*v + v_perp in R^n.

    Parameters
    ----------
    f : callable
        Vectorized over rows: maps an (m, n) array of points to m values
        (real or complex).
    alpha : float
        Hyperplane offset along the unit normal v.
    v : array, shape (n,)
        Unit normal (|v| = 1 within 1e-12); n - 1 quadrature dimensions
        are used, capped at 6 because product rules grow exponentially.
    spec : QuadratureSpec
        Nodes per dimension.

    Returns a TransformResult whose stderr field holds the difference
    against the rule with one node fewer per dimension.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0]
    if abs(math.sqrt(float(v @ v)) - 1.0) > 1e-12:
        raise ValueError("hyperplane normal must be a unit vector within 1e-12")
    ndim = n - 1
    if ndim > MAX_QUAD_DIMS:
        raise ValueError(
            f"quadrature limited to {MAX_QUAD_DIMS} dimensions "
            f"(got n-1 = {ndim}); use the closed or Monte Carlo route")
    base = alpha * v
    if ndim == 0:
        value = complex(np.asarray(f(base[None, :]), dtype=complex)[0])
        return TransformResult(value, 0.0, "quadrature", 1)
    axes = _householder_completion(v)

    def run(k: int) -> complex:
        nodes, weights = gauss_hermite_rule(k)
        return _product_rule_sum(f, base, axes, nodes, weights, ndim)

    value = run(spec.nodes_per_dim)
    if spec.nodes_per_dim > 1:
        coarse = run(spec.nodes_per_dim - 1)
        stderr = abs(value - coarse)
    else:
        stderr = 0.0
    return TransformResult(value, stderr, "quadrature", spec.nodes_per_dim**ndim)


# ---------------------------------------------------------------------------
# disintegration
# ---------------------------------------------------------------------------

def disintegrate_eval(phi: ExponentialFunctional, subspace: AffineSubspace,
                      inner: AffineSubspace, truncation_dim: int, count: int,
                      seed: int, threads: int = 1) -> TransformResult:
    """Nested evaluation of the transform across a split V = S (+) W.

    `inner` describes the sub-subspace S (its anchor is ignored); it must
    be contained in V.  The inner integral against mu_{a+S} is done in
    closed form on the shifted span, the outer integral over the
    complement W of S within V by Monte Carlo:

        integral = E_{y ~ mu_W} [ G_{phi(. + y)}(a + S) ].

    Agrees with radon_closed(phi, subspace) up to Monte Carlo error.
    """
    outer_sub = complement_within(subspace, inner)
    inner_sub = inner.with_anchor(subspace.anchor)
    needed = max(phi.max_index, outer_sub.block_dim)
    if truncation_dim < needed:
        raise ValueError(
            f"truncation_dim {truncation_dim} too small; need >= {needed}")
    # per-term constants: the closed inner integral of c_{w_k}
    terms = phi.terms
    k = len(terms)
    w = np.zeros((k, truncation_dim), dtype=complex)
    c = np.zeros(k, dtype=complex)
    d = np.zeros(k, dtype=complex)  # the exp(<y, w_k>) factor carries no offset
    for row, (coeff, wv) in enumerate(terms):
        w[row] = wv.to_dense(truncation_dim)
        c[row] = coeff * s_transform_delta(inner_sub, wv)
    sampler = GaussianSampler(outer_sub, truncation_dim, seed)

    def work(start, stop):
        y = sampler.chunk(start, stop, count)
        return backends.span_moments(y, w, d, c)

    mean, stderr, n = reduce_moment_chunks(count, threads, work)
    return TransformResult(mean, stderr, "mc", n)


# ---------------------------------------------------------------------------
# truncation tower
# ---------------------------------------------------------------------------

def f_n_eval(phi: ExponentialFunctional, x: CoordVec, n: int) -> complex:
    """Level-n tower value: phi integrated against the delta of x_n + tail.

    x_n is the projection of x onto span{e_1..e_n}.  Once n reaches the
    largest support index of x and of every exponent, the tail correction
    vanishes and the value equals phi(x) exactly.
    """
    xn = x.truncate(n)
    total = 0j
    for coeff, w in phi.terms:
        wt = w.tail(n)
        total += coeff * cmath.exp(
            pairing(xn, w) - 0.5 * pairing(w, w) + 0.5 * pairing(wt, wt))
    return total
