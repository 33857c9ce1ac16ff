"""Independent reference implementations used only by the test suite.

These deliberately avoid the code paths they check: the tube measure
reference merges expanded intervals with a plain sweep, and the lift
reference integrates the piecewise-linear 1D tube measure in closed form
(segment by segment between gap-induced kinks), so no quadrature is
involved.
"""

from __future__ import annotations

import numpy as np

from minktube.intervals import IntervalUnion


def naive_tube_measure(pairs, eps: float) -> float:
    """Expand, sort, merge, sum - the obvious O(n log n) reference."""
    segs = sorted((lo - eps, hi + eps) for lo, hi in pairs)
    merged = [list(segs[0])]
    for a, b in segs[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return sum(b - a for a, b in merged)


def exact_lift_measure(u: IntervalUnion, eps: float) -> float:
    """Closed-form value of 2 * int_0^eps m(sqrt(eps^2 - y^2)) dy.

    The 1D tube measure m(r) of an interval union is piecewise linear in
    r with kinks at half the gap widths:

        m(r) = (T + P_j) + 2*(n - j)*r    for  g_j < 2r <= g_{j+1},

    where T is the total length, g_1 <= g_2 <= ... the sorted gaps and
    P_j their prefix sum.  On each linearity segment the integral has
    the antiderivative A*y + (B/2)*(y*sqrt(eps^2-y^2) + eps^2*asin(y/eps)),
    so the whole lift is an exact finite sum.
    """
    gaps = np.sort(u.lo[1:] - u.hi[:-1])
    prefix = np.concatenate(([0.0], np.cumsum(gaps)))
    total = float(np.sum(u.hi - u.lo))
    n = u.lo.size

    k = int(np.searchsorted(gaps, 2.0 * eps))
    radii = np.concatenate(([0.0], gaps[:k] / 2.0, [eps]))
    j = np.arange(k + 1)
    coeff_a = total + prefix[j]
    coeff_b = 2.0 * (n - j)

    # r decreasing corresponds to y increasing along [0, eps].
    y_hi = np.sqrt(np.maximum(eps * eps - radii[:-1] ** 2, 0.0))
    y_lo = np.sqrt(np.maximum(eps * eps - radii[1:] ** 2, 0.0))

    def anti(y: np.ndarray) -> np.ndarray:
        y = np.clip(y, -eps, eps)
        root = np.sqrt(np.maximum(eps * eps - y * y, 0.0))
        return 0.5 * (y * root + eps * eps * np.arcsin(np.clip(y / eps, -1.0, 1.0)))

    segments = coeff_a * (y_hi - y_lo) + coeff_b * (anti(y_hi) - anti(y_lo))
    return 2.0 * float(np.sum(segments))
