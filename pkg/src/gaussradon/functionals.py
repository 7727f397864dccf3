"""Test functions as finite spans of renormalized exponentials.

The building block is c_w(x) = exp(<x, w> - <w, w> / 2) for a finitely
supported (possibly complex) exponent vector w.  Finite complex-linear
combinations of these are closed under pointwise multiplication and
translation, and every transform in this package has a closed form on
them, which is what makes exact cross-checking possible:

    c_w * c_u        = exp(<w, u>) c_{w+u}
    c_w(. + y)       = exp(<y, w>) c_w
    E[c_z * c_w]     = exp(<w, z>)        (entire-function transform)

Terms are kept merged, zero coefficients dropped, and ordered by a
canonical key, so equal spans compare equal.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .tower import (ComplexCoordVec, CoordVec, EigenSchedule, _as_schedule,
                    _SparseVec, norm_p, pairing)

__all__ = ["ExponentialFunctional"]


def _as_exponent(w) -> ComplexCoordVec:
    if isinstance(w, ComplexCoordVec):
        return w
    if isinstance(w, CoordVec):
        return w.as_complex()
    raise ValueError(f"exponent must be a coordinate vector, got {type(w).__name__}")


def _term_key(w: ComplexCoordVec):
    return tuple((i, v.real, v.imag) for i, v in w.entries)


class ExponentialFunctional:
    """A finite span  sum_k coeff_k * c_{w_k}  with complex coefficients.

    Text form: terms joined by ``|``, each ``coeff@exponent`` with the
    coefficient as a complex literal (``re+imj``) and the exponent in
    coordinate-vector text form; an empty exponent is the constant term.
    Example: ``1+0j@1:1.0|0.5+0j@2:1.0``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        order: list = []
        for coeff, w in terms:
            wv = _as_exponent(w)
            key = _term_key(wv)
            if key not in acc:
                order.append((key, wv))
            acc[key] = acc.get(key, 0j) + complex(coeff)
        self._terms = tuple(
            (acc[key], wv) for key, wv in sorted(order, key=lambda kw: kw[0])
            if acc[key] != 0)

    @property
    def terms(self) -> tuple[tuple[complex, ComplexCoordVec], ...]:
        return self._terms

    @classmethod
    def exponential(cls, w, coeff: complex = 1.0) -> "ExponentialFunctional":
        """The single renormalized exponential coeff * c_w."""
        return cls([(coeff, w)])

    @classmethod
    def constant(cls, value: complex = 1.0) -> "ExponentialFunctional":
        """The constant function (c_0 scaled)."""
        return cls([(value, ComplexCoordVec())])

    @classmethod
    def zero(cls) -> "ExponentialFunctional":
        return cls()

    @property
    def max_index(self) -> int:
        return max((w.max_index for _, w in self._terms), default=0)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, ExponentialFunctional):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"ExponentialFunctional({len(self._terms)} terms, max_index={self.max_index})"

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExponentialFunctional):
            return NotImplemented
        return ExponentialFunctional(list(self._terms) + list(other._terms))

    def __sub__(self, other):
        if not isinstance(other, ExponentialFunctional):
            return NotImplemented
        return self + (-1) * other

    def scale(self, scalar: complex) -> "ExponentialFunctional":
        return ExponentialFunctional((scalar * c, w) for c, w in self._terms)

    def __mul__(self, other):
        if isinstance(other, ExponentialFunctional):
            return self.multiply(other)
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def multiply(self, other: "ExponentialFunctional") -> "ExponentialFunctional":
        """Pointwise product, term by term: c_w c_u = exp(<w,u>) c_{w+u}."""
        out = []
        for c1, w1 in self._terms:
            for c2, w2 in other._terms:
                out.append((c1 * c2 * cmath.exp(pairing(w1, w2)), w1 + w2))
        return ExponentialFunctional(out)

    def translate(self, y: CoordVec) -> "ExponentialFunctional":
        """The shifted function x -> self(x + y): scales each term by exp(<y, w>)."""
        return ExponentialFunctional(
            (c * cmath.exp(pairing(y, w)), w) for c, w in self._terms)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, x: _SparseVec) -> complex:
        """Pointwise value sum_k coeff_k exp(<x, w_k> - <w_k, w_k>/2)."""
        total = 0j
        for c, w in self._terms:
            total += c * cmath.exp(pairing(x, w) - 0.5 * pairing(w, w))
        return total

    def evaluate_dense(self, x: np.ndarray, dim: int) -> np.ndarray:
        """Vectorized evaluation on rows of a real (..., dim) array."""
        x = np.asarray(x, dtype=float)
        if self.max_index > dim:
            raise ValueError(
                f"functional touches index {self.max_index}, beyond dim {dim}")
        w, d, c = self.dense_arrays(dim)
        if w.shape[0] == 0:
            return np.zeros(x.shape[:-1], dtype=complex)
        z = x @ w.real.T + 1j * (x @ w.imag.T)
        return np.exp(z + d) @ c

    def dense_arrays(self, dim: int):
        """(exponent matrix (K, dim), renormalizations (K,), coefficients (K,))."""
        k = len(self._terms)
        w = np.zeros((k, dim), dtype=complex)
        d = np.zeros(k, dtype=complex)
        c = np.zeros(k, dtype=complex)
        for row, (coeff, wv) in enumerate(self._terms):
            w[row] = wv.to_dense(dim)
            d[row] = -0.5 * pairing(wv, wv)
            c[row] = coeff
        return w, d, c

    # -- transforms ----------------------------------------------------------

    def s_transform(self, z) -> complex:
        """The entire-function transform: sum_k coeff_k exp(<w_k, z>)."""
        z = _as_exponent(z)
        total = 0j
        for c, w in self._terms:
            total += c * cmath.exp(pairing(w, z))
        return total

    def growth_constant(self, p: int, schedule: EigenSchedule | None = None) -> float:
        """A certified constant K_p with |self(x)| <= K_p exp(|x|_{-p}^2 / 2).

        Per term, |c_w(x)| <= exp(|x|_{-p}^2/2) exp((|Re w|_p^2 - Re<w,w>)/2)
        by the duality bound and Young's inequality, and that per-term
        constant is attained along x = lambda^{2p} Re w, so it is sharp;
        the triangle-inequality sum over terms need not be.
        """
        sched = _as_schedule(schedule)
        total = 0.0
        for c, w in self._terms:
            s = w.real
            total += abs(c) * math.exp(
                0.5 * (norm_p(s, p, sched) ** 2 - pairing(w, w).real))
        return total

    # -- text form -------------------------------------------------------------

    def to_text(self) -> str:
        def fmt(c: complex) -> str:
            return f"{c.real:.17g}{c.imag:+.17g}j"
        return "|".join(f"{fmt(c)}@{w.to_text()}" for c, w in self._terms)

    @classmethod
    def from_text(cls, text: str) -> "ExponentialFunctional":
        text = text.strip()
        if not text:
            return cls()
        terms = []
        for part in text.split("|"):
            coeff_s, sep, w_s = part.partition("@")
            if not sep:
                raise ValueError(f"bad functional term {part!r}: expected coeff@coordvec")
            try:
                coeff = complex(coeff_s)
            except ValueError:
                raise ValueError(f"bad functional coefficient {coeff_s!r}") from None
            terms.append((coeff, ComplexCoordVec.from_text(w_s)))
        return cls(terms)
