"""Shared helpers for building random test objects with fixed seeds."""

import numpy as np

from gaussradon import AffineSubspace, ComplexCoordVec, CoordVec, ExponentialFunctional


def random_sparse(rng, max_index=10, max_terms=4, scale=1.0) -> CoordVec:
    k = int(rng.integers(1, min(max_terms, max_index) + 1))
    support = rng.choice(max_index, size=k, replace=False) + 1
    return CoordVec((int(i), float(rng.normal(scale=scale))) for i in support)


def random_complex_sparse(rng, max_index=10, max_terms=4, scale=1.0) -> ComplexCoordVec:
    k = int(rng.integers(1, min(max_terms, max_index) + 1))
    support = rng.choice(max_index, size=k, replace=False) + 1
    return ComplexCoordVec(
        (int(i), complex(rng.normal(scale=scale), rng.normal(scale=scale)))
        for i in support)


def random_unit(rng, n) -> CoordVec:
    v = rng.normal(size=n)
    return CoordVec.from_dense(v / np.linalg.norm(v))


def random_span(rng, n=4, terms=2, scale=1.0) -> ExponentialFunctional:
    return ExponentialFunctional(
        [(complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)),
          ComplexCoordVec.from_dense(
              rng.uniform(-scale, scale, n) + 1j * rng.uniform(-scale, scale, n)))
         for _ in range(terms)])


def random_hyperplane(rng, n=4):
    alpha = float(rng.uniform(-1.5, 1.5))
    v = random_unit(rng, n)
    return alpha, v, AffineSubspace.hyperplane(alpha, v)
