"""Exact bounded subsets of the line as canonical unions of closed intervals.

An :class:`IntervalUnion` stores sorted, pairwise-disjoint closed
intervals with strict gaps between consecutive members (touching
intervals are merged on construction; degenerate single-point intervals
are allowed).  The epsilon-neighborhood measure of such a union has the
closed form

    measure(eps) = total_length + 2*n*eps - sum_i max(0, 2*eps - gap_i),

so with the gaps sorted and prefix-summed once at construction time a
tube evaluation costs one binary search.  This makes million-point sets
(truncated fractal strings, discrete orbits) cheap to probe across many
scales.

Instances are immutable after construction; every operation here is a
pure function, safe for concurrent use.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResolutionError

#: Depth cap for middle-thirds covers; 3^-(41) spacing is already below
#: what double-precision epsilon schedules can resolve.
CANTOR_DEPTH_CAP = 40


class IntervalUnion:
    """Canonical finite union of disjoint closed intervals."""

    __slots__ = ("lo", "hi", "_gaps", "_gap_prefix", "_total_length", "notes")

    def __init__(self, intervals: Iterable[Sequence[float]], notes: tuple[str, ...] = ()):
        pairs = np.asarray(list(intervals), dtype=np.float64)
        if pairs.size == 0:
            raise DomainError("IntervalUnion requires at least one interval")
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise DomainError("intervals must be (lo, hi) pairs")
        if not np.all(np.isfinite(pairs)):
            raise DomainError("interval endpoints must be finite")
        if np.any(pairs[:, 0] > pairs[:, 1]):
            raise DomainError("each interval needs lo <= hi")
        lo, hi = _normalize(pairs[:, 0], pairs[:, 1])
        self.lo = lo
        self.hi = hi
        self.notes = tuple(notes)
        self._total_length = float(np.sum(hi - lo))
        gaps = np.sort(lo[1:] - hi[:-1])
        self._gaps = gaps
        self._gap_prefix = np.concatenate(([0.0], np.cumsum(gaps)))

    @classmethod
    def _from_canonical(
        cls, lo: np.ndarray, hi: np.ndarray, notes: tuple[str, ...] = ()
    ) -> "IntervalUnion":
        u = cls.__new__(cls)
        u.lo = lo
        u.hi = hi
        u.notes = notes
        u._total_length = float(np.sum(hi - lo))
        gaps = np.sort(lo[1:] - hi[:-1])
        u._gaps = gaps
        u._gap_prefix = np.concatenate(([0.0], np.cumsum(gaps)))
        return u

    # -- basic geometry ------------------------------------------------

    @property
    def count(self) -> int:
        return int(self.lo.size)

    @property
    def total_length(self) -> float:
        return self._total_length

    @property
    def hull_lo(self) -> float:
        return float(self.lo[0])

    @property
    def hull_hi(self) -> float:
        return float(self.hi[-1])

    @property
    def hull_length(self) -> float:
        return self.hull_hi - self.hull_lo

    @property
    def smallest_gap(self) -> float | None:
        """Width of the narrowest gap between consecutive intervals."""
        if self._gaps.size == 0:
            return None
        return float(self._gaps[0])

    def to_pairs(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.lo, self.hi)]

    # -- transformations ------------------------------------------------

    def scale(self, lam: float) -> "IntervalUnion":
        """Dilate about the origin by lam > 0 (canonical form is preserved)."""
        if not math.isfinite(lam) or lam <= 0.0:
            raise DomainError(f"scale factor must be positive, got {lam!r}")
        return IntervalUnion._from_canonical(self.lo * lam, self.hi * lam, self.notes)

    def translate(self, t: float) -> "IntervalUnion":
        if not math.isfinite(t):
            raise DomainError(f"translation must be finite, got {t!r}")
        return IntervalUnion._from_canonical(self.lo + t, self.hi + t, self.notes)

    # -- measures --------------------------------------------------------

    def tube_measure(self, eps: float) -> float:
        """Exact Lebesgue measure of the eps-neighborhood on the line."""
        if not math.isfinite(eps) or eps < 0.0:
            raise DomainError(f"eps must be >= 0, got {eps!r}")
        k = int(np.searchsorted(self._gaps, 2.0 * eps))
        n = self.lo.size
        return (
            self.total_length
            + 2.0 * eps * n
            - (2.0 * eps * k - float(self._gap_prefix[k]))
        )

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __hash__(self) -> int:
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def __repr__(self) -> str:
        if self.count <= 6:
            body = ", ".join(f"[{a:g},{b:g}]" for a, b in self.to_pairs())
        else:
            body = (
                f"[{self.lo[0]:g},{self.hi[0]:g}], ... {self.count - 2} more ..., "
                f"[{self.lo[-1]:g},{self.hi[-1]:g}]"
            )
        return f"IntervalUnion({body})"


def _normalize(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort and merge overlapping or touching intervals."""
    order = np.argsort(lo, kind="stable")
    lo = lo[order]
    hi = hi[order]
    cummax = np.maximum.accumulate(hi)
    starts = np.empty(lo.size, dtype=bool)
    starts[0] = True
    starts[1:] = lo[1:] > cummax[:-1]
    idx = np.flatnonzero(starts)
    ends = np.concatenate((idx[1:] - 1, [lo.size - 1]))
    return lo[idx].copy(), cummax[ends].copy()


def tube_measure_1d(u: IntervalUnion, eps: float) -> float:
    """Exact measure of the eps-neighborhood of ``u`` in R."""
    return u.tube_measure(eps)


def make_points(xs: Sequence[float]) -> IntervalUnion:
    """Degenerate interval union from a nonempty list of points."""
    arr = np.asarray(list(xs), dtype=np.float64)
    if arr.size == 0:
        raise DomainError("make_points requires at least one point")
    if not np.all(np.isfinite(arr)):
        raise DomainError("points must be finite")
    pairs = np.stack([arr, arr], axis=1)
    return IntervalUnion(pairs)


def make_intervals(pairs: Sequence[Sequence[float]]) -> IntervalUnion:
    """Interval union from (lo, hi) pairs, normalized to canonical form."""
    return IntervalUnion(pairs)


def a_string(a: float, n_terms: int) -> IntervalUnion:
    """The point set {n^-a : 1 <= n <= n_terms} together with 0.

    A truncation of the classical string whose box dimension tends to
    1/(1+a); the accumulation point 0 is included so the hull is
    [0, 1].
    """
    if not math.isfinite(a) or a <= 0.0:
        raise DomainError(f"a must be positive, got {a!r}")
    if n_terms < 2:
        raise DomainError(f"n_terms must be >= 2, got {n_terms}")
    n = np.arange(n_terms, 0, -1, dtype=np.float64)
    pts = np.concatenate(([0.0], n**-a))
    if np.all(np.diff(pts) > 0.0):
        return IntervalUnion._from_canonical(pts, pts.copy())
    # Extreme exponents can underflow tail points onto 0; normalize then.
    return IntervalUnion(np.stack([pts, pts], axis=1))


def alpha_orbit(alpha: float, x0: float, n_terms: int) -> IntervalUnion:
    """Discrete orbit of g(x) = x - x^alpha started at x0 in (0, 1).

    Iterates decrease monotonically toward 0.  If an iterate leaves
    (0, 1) or underflows below 1e-300 before n_terms points are
    produced, the orbit is truncated and a note recording the actual
    count is attached to the result (this is not an error).
    """
    if not math.isfinite(alpha) or alpha <= 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha!r}")
    if not (0.0 < x0 < 1.0):
        raise DomainError(f"x0 must lie in (0, 1), got {x0!r}")
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms}")
    if x0 - x0**alpha <= 0.0:
        raise DomainError(f"orbit leaves (0, 1) immediately from x0 = {x0!r}")

    pts = np.empty(n_terms, dtype=np.float64)
    x = float(x0)
    count = 0
    notes: tuple[str, ...] = ()
    for k in range(n_terms):
        pts[k] = x
        count = k + 1
        nxt = x - x**alpha
        if not (0.0 < nxt < 1.0) or nxt < 1e-300:
            if count < n_terms:
                notes = (
                    f"orbit truncated at {count} of {n_terms} points "
                    f"(next iterate {nxt:.3e} left the working range)",
                )
            break
        x = nxt
    pts = pts[:count][::-1].copy()
    pairs = np.stack([pts, pts], axis=1)
    return IntervalUnion(pairs, notes=notes)


def cantor_level_for(eps: float, depth_cap: int = CANTOR_DEPTH_CAP) -> int:
    """Smallest cover depth k with 3^-(k+1)/2 <= eps."""
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    k = 0
    while 3.0 ** -(k + 1) / 2.0 > eps:
        k += 1
        if k > depth_cap:
            raise ResolutionError(
                f"eps = {eps!r} needs middle-thirds depth {k} > cap {depth_cap}"
            )
    return k


def cantor_cover(eps: float, depth_cap: int = CANTOR_DEPTH_CAP) -> IntervalUnion:
    """Level-k middle-thirds cover whose eps-neighborhood matches the
    Cantor set's exactly.

    k is the smallest depth such that every point of a level-k interval
    lies within 3^-(k+1)/2 <= eps of the Cantor set; the eps-neighborhood
    of the cover then coincides with the eps-neighborhood of the set
    itself, so 1D tube measures computed on the cover are exact.
    """
    k = cantor_level_for(eps, depth_cap)
    return cantor_cover_at_level(k)


def cantor_cover_at_level(k: int) -> IntervalUnion:
    """The 2^k closed level-k intervals of the middle-thirds construction."""
    if k < 0:
        raise DomainError(f"level must be >= 0, got {k}")
    if k > CANTOR_DEPTH_CAP:
        raise ResolutionError(f"level {k} exceeds depth cap {CANTOR_DEPTH_CAP}")
    lo = np.array([0.0])
    for j in range(k):
        w = 3.0 ** -(j + 1)
        lo = np.sort(np.concatenate((lo, lo + 2.0 * w)))
    hi = lo + 3.0**-k
    return IntervalUnion._from_canonical(lo, hi)
