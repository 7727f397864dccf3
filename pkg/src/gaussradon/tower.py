"""Weighted sequence-space core.

Everything downstream is built over a fixed orthonormal coordinate system
e_1, e_2, ... weighted by a strictly increasing eigenvalue schedule
lambda_1 < lambda_2 < ... with lambda_1 > 1.  This module provides:

* sparse real and complex coordinate vectors (finite support, exact ops),
* the scale of norms  |x|_p = sqrt(sum_n lambda_n^(2p) |x_n|^2)  for any
  integer p (negative p gives the dual norms),
* the bilinear pairing  <x, y> = sum_n x_n y_n  (never conjugated),
* affine subspaces  a + V  described by a finite block projector plus a
  uniform tail flag, with exact orthogonal splitting y = y_V + y_Vperp.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "EigenSchedule",
    "DEFAULT_SCHEDULE",
    "CoordVec",
    "ComplexCoordVec",
    "AffineSubspace",
    "norm_p",
    "pairing",
    "project_affine",
    "complement_within",
]

_SYMMETRY_TOL = 1e-12
_IDEMPOTENT_TOL = 1e-10
_UNIT_TOL = 1e-12


class EigenSchedule:
    """Eigenvalue sequence lambda_1 < lambda_2 < ... with lambda_1 > 1.

    The default rule is lambda_n = n + 1.  A custom rule is any map from
    index n >= 1 to a float; strict growth and lambda_1 > 1 are checked on
    a finite prefix at construction.  Square-summability of 1/lambda_n^2
    is a standing assumption that cannot be observed from finite prefixes,
    so it is documented rather than enforced.
    """

    def __init__(self, rule: Callable[[int], float] | None = None,
                 name: str = "n+1", check_prefix: int = 32):
        self._rule = rule if rule is not None else (lambda n: float(n + 1))
        self.name = name
        prev = 1.0
        for n in range(1, check_prefix + 1):
            lam = float(self._rule(n))
            if lam <= prev:
                raise ValueError(
                    f"eigenvalue schedule must be strictly increasing with "
                    f"lambda_1 > 1; got lambda_{n} = {lam!r}")
            prev = lam

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"eigenvalue index must be >= 1, got {n}")
        return float(self._rule(n))

    def weights(self, indices: Iterable[int], p: int) -> np.ndarray:
        """lambda_n^(2p) for each index, as a float array."""
        return np.array([self(n) ** (2 * p) for n in indices], dtype=float)

    @classmethod
    def linear(cls, slope: float, offset: float) -> "EigenSchedule":
        """lambda_n = slope*n + offset (needs slope > 0 and slope+offset > 1)."""
        return cls(lambda n: slope * n + offset, name=f"linear:{slope},{offset}")

    def __repr__(self):
        return f"EigenSchedule({self.name})"


DEFAULT_SCHEDULE = EigenSchedule()


def _as_schedule(schedule: EigenSchedule | None) -> EigenSchedule:
    return DEFAULT_SCHEDULE if schedule is None else schedule


class _SparseVec:
    """Shared machinery for finitely supported coordinate vectors.

    Entries are kept as a tuple of (index, value) pairs sorted by index,
    with exact zeros dropped and indices validated to be >= 1.
    """

    __slots__ = ("_entries",)
    _scalar = float  # overridden by subclasses
    __array_ufunc__ = None  # numpy scalars must defer to __rmul__ below

    def __init__(self, entries: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        acc: dict[int, complex] = {}
        for idx, val in items:
            i = int(idx)
            if i != idx or i < 1:
                raise ValueError(f"coordinate index must be a positive integer, got {idx!r}")
            acc[i] = acc.get(i, 0) + self._coerce(val)
        self._entries = tuple(sorted((i, v) for i, v in acc.items() if v != 0))

    @classmethod
    def _coerce(cls, val):
        raise NotImplementedError

    @property
    def entries(self) -> tuple:
        return self._entries

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._entries)

    @property
    def max_index(self) -> int:
        """Largest occupied index (0 for the zero vector)."""
        return self._entries[-1][0] if self._entries else 0

    def __getitem__(self, n: int):
        for i, v in self._entries:
            if i == n:
                return v
        return self._scalar(0)

    def __bool__(self):
        return bool(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other):
        if not isinstance(other, _SparseVec):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, _SparseVec):
            return NotImplemented
        cls = _join_type(type(self), type(other))
        return cls(list(self._entries) + list(other._entries))

    def __sub__(self, other):
        if not isinstance(other, _SparseVec):
            return NotImplemented
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, scalar):
        if isinstance(scalar, _SparseVec):
            return NotImplemented
        cls = type(self)
        if isinstance(scalar, complex) and not isinstance(scalar, (int, float)):
            cls = ComplexCoordVec
        return cls((i, v * scalar) for i, v in self._entries)

    __rmul__ = __mul__

    # -- structure -------------------------------------------------------

    def truncate(self, n: int):
        """Projection onto span{e_1..e_n}: keep entries with index <= n."""
        return type(self)((i, v) for i, v in self._entries if i <= n)

    def tail(self, n: int):
        """Complementary part: entries with index > n."""
        return type(self)((i, v) for i, v in self._entries if i > n)

    def to_dense(self, dim: int) -> np.ndarray:
        """First `dim` coordinates as a dense array (1-based index i -> slot i-1)."""
        out = np.zeros(dim, dtype=self._dtype)
        for i, v in self._entries:
            if i <= dim:
                out[i - 1] = v
        return out

    @classmethod
    def from_dense(cls, arr) -> "_SparseVec":
        return cls((i + 1, v) for i, v in enumerate(np.asarray(arr).tolist()))

    @classmethod
    def unit(cls, n: int) -> "_SparseVec":
        """The basis vector e_n."""
        return cls(((n, 1.0),))

    @classmethod
    def zero(cls) -> "_SparseVec":
        return cls()

    def __repr__(self):
        body = ", ".join(f"{i}: {v!r}" for i, v in self._entries)
        return f"{type(self).__name__}({{{body}}})"


class CoordVec(_SparseVec):
    """Finitely supported real coordinate vector over the eigenbasis.

    Text form: semicolon-separated ``index:value`` pairs, e.g.
    ``1:0.5;3:-2.0``; the empty string is the zero vector.
    """

    __slots__ = ()
    _scalar = float
    _dtype = np.float64

    @classmethod
    def _coerce(cls, val):
        if isinstance(val, complex) and not isinstance(val, (int, float)):
            if val.imag != 0:
                raise ValueError(f"CoordVec entries must be real, got {val!r}")
            val = val.real
        return float(val)

    def as_complex(self) -> "ComplexCoordVec":
        return ComplexCoordVec(self._entries)

    def to_text(self) -> str:
        return ";".join(f"{i}:{v:.17g}" for i, v in self._entries)

    @classmethod
    def from_text(cls, text: str) -> "CoordVec":
        return cls(_parse_entries(text, float, "CoordVec"))


class ComplexCoordVec(_SparseVec):
    """Complex-valued coordinate vector; same structure as CoordVec.

    Text form values may be complex literals such as ``1:0.5+1j``.
    """

    __slots__ = ()
    _scalar = complex
    _dtype = np.complex128

    @classmethod
    def _coerce(cls, val):
        return complex(val)

    @property
    def real(self) -> CoordVec:
        return CoordVec((i, v.real) for i, v in self._entries)

    @property
    def imag(self) -> CoordVec:
        return CoordVec((i, v.imag) for i, v in self._entries)

    def as_complex(self) -> "ComplexCoordVec":
        return self

    def to_text(self) -> str:
        return ";".join(f"{i}:{_fmt_scalar(v)}" for i, v in self._entries)

    @classmethod
    def from_text(cls, text: str) -> "ComplexCoordVec":
        return cls(_parse_entries(text, _parse_scalar, "ComplexCoordVec"))


def _join_type(a, b):
    if a is ComplexCoordVec or b is ComplexCoordVec:
        return ComplexCoordVec
    return CoordVec


def _fmt_scalar(v: complex) -> str:
    if v.imag == 0:
        return f"{v.real:.17g}"
    return f"{v.real:.17g}{v.imag:+.17g}j"


def _parse_scalar(tok: str) -> complex:
    try:
        return float(tok)
    except ValueError:
        return complex(tok)


def _parse_entries(text: str, conv, what: str):
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(";"):
        idx, sep, val = part.partition(":")
        if not sep:
            raise ValueError(f"bad {what} entry {part!r}: expected index:value")
        try:
            out.append((int(idx), conv(val)))
        except ValueError as exc:
            raise ValueError(f"bad {what} entry {part!r}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# norms and pairing
# ---------------------------------------------------------------------------

def norm_p(x: _SparseVec, p: int, schedule: EigenSchedule | None = None) -> float:
    """The weighted norm sqrt(sum_n lambda_n^(2p) |x_n|^2).

    Exact for finite support; p may be any integer (negative p gives the
    dual-space norms).  The empty vector has norm 0.
    """
    sched = _as_schedule(schedule)
    total = 0.0
    for i, v in x.entries:
        total += sched(i) ** (2 * p) * abs(v) ** 2
    return math.sqrt(total)


def pairing(x: _SparseVec, y: _SparseVec):
    """Bilinear pairing sum_n x_n y_n (complex bilinear, never sesquilinear).

    Returns a float when both arguments are real, a complex otherwise.
    """
    ax, ay = dict(x.entries), dict(y.entries)
    small, big = (ax, ay) if len(ax) <= len(ay) else (ay, ax)
    total = 0
    for i in sorted(small):
        if i in big:
            total += small[i] * big[i]
    if isinstance(x, ComplexCoordVec) or isinstance(y, ComplexCoordVec):
        return complex(total)
    return float(total)


# ---------------------------------------------------------------------------
# affine subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """An affine subspace a + V, with V = col(P) plus an optional full tail.

    ``block_projector`` is an m x m orthogonal projector acting on the
    coordinates 1..m; every coordinate with index > m belongs to V iff
    ``tail_in``.  The anchor must be supported inside the block.  This
    covers every subspace used here (hyperplane complements, coordinate
    blocks and their complements, rotated lines) while keeping projection
    exact.
    """

    anchor: CoordVec
    block_dim: int
    block_projector: np.ndarray
    tail_in: bool

    def __post_init__(self):
        P = np.array(self.block_projector, dtype=float)
        m = int(self.block_dim)
        if m < 1:
            raise ValueError(f"block_dim must be >= 1, got {m}")
        if P.shape != (m, m):
            raise ValueError(f"block_projector must be {m}x{m}, got shape {P.shape}")
        if np.max(np.abs(P - P.T), initial=0.0) > _SYMMETRY_TOL:
            raise ValueError("block_projector is not symmetric within 1e-12")
        if np.max(np.abs(P @ P - P), initial=0.0) > _IDEMPOTENT_TOL:
            raise ValueError("block_projector is not idempotent within 1e-10")
        if not isinstance(self.anchor, CoordVec):
            raise ValueError("anchor must be a real CoordVec")
        if self.anchor.max_index > m:
            raise ValueError(
                f"anchor support reaches index {self.anchor.max_index}, "
                f"beyond the block of size {m}")
        P.setflags(write=False)
        object.__setattr__(self, "block_projector", P)
        object.__setattr__(self, "block_dim", m)
        object.__setattr__(self, "tail_in", bool(self.tail_in))

    # -- constructors ----------------------------------------------------

    @classmethod
    def hyperplane(cls, alpha: float, v: CoordVec, block_dim: int | None = None) -> "AffineSubspace":
        """The hyperplane alpha*v + v_perp for a unit vector v.

        v must be finitely supported; the block is span{e_1..e_m} with
        m >= max support index of v, the projector is I - v v^T and the
        whole tail lies in the subspace.
        """
        if abs(pairing(v, v) - 1.0) > _UNIT_TOL:
            raise ValueError("hyperplane direction must be a unit vector within 1e-12")
        m = max(v.max_index, 1 if block_dim is None else block_dim)
        vd = v.to_dense(m)
        P = np.eye(m) - np.outer(vd, vd)
        return cls(anchor=float(alpha) * v, block_dim=m, block_projector=P, tail_in=True)

    @classmethod
    def full(cls) -> "AffineSubspace":
        """V = the whole space (carrier of the background measure)."""
        return cls(anchor=CoordVec(), block_dim=1, block_projector=np.eye(1), tail_in=True)

    @classmethod
    def point(cls, anchor: CoordVec | None = None) -> "AffineSubspace":
        """V = {0}: the point mass at the anchor."""
        a = anchor if anchor is not None else CoordVec()
        m = max(a.max_index, 1)
        return cls(anchor=a, block_dim=m, block_projector=np.zeros((m, m)), tail_in=False)

    @classmethod
    def leading_span(cls, n: int) -> "AffineSubspace":
        """V = span{e_1..e_n}."""
        return cls(anchor=CoordVec(), block_dim=n, block_projector=np.eye(n), tail_in=False)

    @classmethod
    def trailing_span(cls, n: int) -> "AffineSubspace":
        """V = span{e_(n+1), e_(n+2), ...} (complement of the leading block)."""
        return cls(anchor=CoordVec(), block_dim=n, block_projector=np.zeros((n, n)), tail_in=True)

    @classmethod
    def from_span(cls, vectors: Sequence[CoordVec], block_dim: int | None = None,
                  tail_in: bool = False, anchor: CoordVec | None = None) -> "AffineSubspace":
        """Subspace spanned by finitely many vectors (plus the tail if asked).

        The projector is built from an SVD orthonormalization, so the
        vectors need not be independent or normalized.
        """
        m = max([v.max_index for v in vectors] + [block_dim or 1])
        if vectors:
            M = np.stack([v.to_dense(m) for v in vectors], axis=1)
            U, s, _ = np.linalg.svd(M, full_matrices=False)
            keep = s > 1e-12 * max(s[0], 1.0)
            Ur = U[:, keep]
            P = Ur @ Ur.T
        else:
            P = np.zeros((m, m))
        return cls(anchor=anchor or CoordVec(), block_dim=m, block_projector=P, tail_in=tail_in)

    # -- derived views ---------------------------------------------------

    def with_anchor(self, anchor: CoordVec) -> "AffineSubspace":
        """Same subspace, different anchor (block grown to hold it)."""
        grown = self.padded(max(self.block_dim, anchor.max_index))
        return AffineSubspace(anchor, grown.block_dim, grown.block_projector, grown.tail_in)

    def padded(self, dim: int) -> "AffineSubspace":
        """Equivalent description over a block of size >= block_dim."""
        if dim < self.block_dim:
            raise ValueError("cannot shrink the block")
        if dim == self.block_dim:
            return self
        return AffineSubspace(self.anchor, dim, self.projector_at(dim), self.tail_in)

    def projector_at(self, dim: int) -> np.ndarray:
        """The block projector extended to the first `dim` coordinates."""
        if dim < self.block_dim:
            raise ValueError("projector_at needs dim >= block_dim")
        P = np.zeros((dim, dim))
        m = self.block_dim
        P[:m, :m] = self.block_projector
        if self.tail_in and dim > m:
            P[range(m, dim), range(m, dim)] = 1.0
        return P

    @property
    def block_rank(self) -> int:
        return int(round(float(np.trace(self.block_projector))))

    # -- the projection operation ----------------------------------------

    def project(self, y: _SparseVec) -> tuple[_SparseVec, _SparseVec]:
        """Split y = y_V + y_Vperp.

        The block part goes through P with the complement computed as the
        residual b - Pb (so the parts sum back to y up to one rounding per
        coordinate); tail coordinates are assigned wholly to one side by
        the tail flag.
        """
        m = self.block_dim
        cls = type(y)
        block = y.truncate(m)
        tail_part = y.tail(m)
        b = block.to_dense(m)
        bv = self.block_projector @ b
        bperp = b - bv
        y_v = cls.from_dense(bv)
        y_perp = cls.from_dense(bperp)
        # dense arrays only cover the block; reattach high indices
        if self.tail_in:
            y_v = y_v + tail_part
        else:
            y_perp = y_perp + tail_part
        return y_v, y_perp

    def __repr__(self):
        return (f"AffineSubspace(anchor={self.anchor!r}, block_dim={self.block_dim}, "
                f"rank={self.block_rank}, tail_in={self.tail_in})")


def project_affine(y: _SparseVec, subspace: AffineSubspace) -> tuple[_SparseVec, _SparseVec]:
    """Orthogonal split of y along the subspace: returns (y_V, y_Vperp)."""
    return subspace.project(y)


def complement_within(outer: AffineSubspace, inner: AffineSubspace) -> AffineSubspace:
    """The orthogonal complement of `inner` inside `outer`'s subspace part.

    Anchors are ignored; raises if `inner` is not contained in `outer`
    (containment checked as Q P = Q on a common block at 1e-10, and on the
    tail flags).
    """
    if inner.tail_in and not outer.tail_in:
        raise ValueError("inner subspace has tail coordinates the outer one lacks")
    m = max(outer.block_dim, inner.block_dim)
    P = outer.projector_at(m)
    Q = inner.projector_at(m)
    if np.max(np.abs(Q @ P - Q), initial=0.0) > _IDEMPOTENT_TOL:
        raise ValueError("inner subspace is not contained in the outer one (QP != Q at 1e-10)")
    return AffineSubspace(
        anchor=CoordVec(),
        block_dim=m,
        block_projector=P - Q,
        tail_in=outer.tail_in and not inner.tail_in,
    )
