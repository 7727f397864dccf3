"""Dual-norm balls: the canonical convex, projectively compact sets.

A ball B_r^{-p}(y) = {x : |x - y|_{-p} <= r} has coordinate projections
that are closed ellipsoids, nested in the sense that membership of the
first n+1 coordinates implies membership of the first n.  Because the
dual norm is a sum of nonnegative terms, a finitely supported x lies in
the ball iff every finite coordinate projection lies in the projected
ellipsoid, and the full check terminates at the support's end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tower import CoordVec, EigenSchedule, _as_schedule

__all__ = ["DualBall", "ProjectiveCompactSet", "offside"]


@dataclass(frozen=True)
class DualBall:
    """Closed ball of radius r around `center` in the |.|_{-p} norm (p >= 1)."""

    p: int
    center: CoordVec
    radius: float

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"dual-ball order p must be >= 1, got {self.p}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not isinstance(self.center, CoordVec):
            raise ValueError("center must be a real CoordVec")

    def _sq_offset(self, x: CoordVec, n: int | None, schedule: EigenSchedule | None) -> float:
        sched = _as_schedule(schedule)
        diff = x - self.center
        total = 0.0
        for i, v in diff.entries:
            if n is None or i <= n:
                total += sched(i) ** (-2 * self.p) * v * v
        return total

    def contains(self, x: CoordVec, schedule: EigenSchedule | None = None) -> bool:
        """Full membership test (exact for finite support)."""
        return self._sq_offset(x, None, schedule) <= self.radius**2

    def contains_projection(self, x: CoordVec, n: int,
                            schedule: EigenSchedule | None = None) -> bool:
        """Membership of the first n coordinates in the projected ellipsoid C_n."""
        return self._sq_offset(x, n, schedule) <= self.radius**2


# The only projectively compact variant shipped; arbitrary convex bodies
# with compact projections are an extension point.
ProjectiveCompactSet = DualBall


def offside(ball: DualBall, alpha: float, v: CoordVec,
            schedule: EigenSchedule | None = None) -> bool:
    """True iff the point alpha*v lies outside the ball.

    This is the point-membership test used to decide whether a hyperplane
    with unit normal v at offset alpha is relevant to the support of a
    function concentrated on the ball.
    """
    return not ball.contains(alpha * v, schedule)
