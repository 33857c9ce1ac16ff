"""Box-dimension fitting and windowed Minkowski content estimation.

The limits defining contents and dimensions are unobservable at finite
scale, so this module works on a geometric epsilon schedule and reads

* the box dimension from the least-squares slope of log measure against
  log eps (measure ~ C * eps^(N-d)), and
* the lower/upper s-dimensional contents from the min/max of
  q(eps) = measure / eps^(N-s) over the final decades of the schedule
  (the "window"), normalizing by the unit-ball volume gamma_ball(N-s).

The window trace is retained so oscillation (the signature of
non-measurable sets) stays visible in reports and plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .ballvol import gamma_ball
from .errors import DataError, DomainError
from .tube import TubeFunction

VERDICT_MEASURABLE = "measurable"
VERDICT_NONDEGENERATE = "nondegenerate"
VERDICT_DEGENERATE_ZERO = "degenerate_zero"
VERDICT_DEGENERATE_INFINITE = "degenerate_infinite"
VERDICT_INCONCLUSIVE = "inconclusive"

#: Default measurability tolerance for quadrature-backed estimates.
DEFAULT_MEASURABILITY_RTOL = 0.02
#: Default measurability tolerance for stochastic estimates.
DEFAULT_MEASURABILITY_RTOL_STOCHASTIC = 0.05
#: Window values below this are treated as collapsed to zero.
DEFAULT_ZERO_FLOOR = 1e-12
#: Per-decade drift beyond which a monotone window counts as divergent.
DEFAULT_DIVERGENCE_PER_DECADE = 0.05
#: Stochastic evaluations must keep stderr below this fraction of the value.
MAX_STOCHASTIC_NOISE = 0.01


class EpsSchedule:
    """Descending geometric epsilon schedule."""

    __slots__ = ("eps_max", "eps_min", "points_per_decade", "values")

    def __init__(self, eps_max: float, eps_min: float, points_per_decade: int = 8):
        if not (math.isfinite(eps_min) and math.isfinite(eps_max)):
            raise DomainError("schedule bounds must be finite")
        if not (0.0 < eps_min < eps_max):
            raise DomainError(
                f"need 0 < eps_min < eps_max, got [{eps_min!r}, {eps_max!r}]"
            )
        if points_per_decade < 4:
            raise DomainError(
                f"points_per_decade must be >= 4, got {points_per_decade}"
            )
        self.eps_max = float(eps_max)
        self.eps_min = float(eps_min)
        self.points_per_decade = int(points_per_decade)
        decades = math.log10(eps_max / eps_min)
        n = max(2, int(round(decades * points_per_decade)) + 1)
        self.values = np.geomspace(eps_max, eps_min, n)

    @property
    def decades(self) -> float:
        return math.log10(self.eps_max / self.eps_min)

    def __len__(self) -> int:
        return int(self.values.size)

    def __repr__(self) -> str:
        return (
            f"EpsSchedule({self.eps_max:g} .. {self.eps_min:g}, "
            f"{self.points_per_decade}/decade, {len(self)} points)"
        )


@dataclass
class DimensionFit:
    """Least-squares box dimension with a t-based 95% confidence band."""

    ambient_n: int
    fitted_d: float
    ci_halfwidth: float
    residual: float
    trace: list[tuple[float, float]] = field(repr=False)  # (log eps, log meas)


@dataclass
class ContentEstimate:
    """Windowed lower/upper s-dimensional content and its normalization."""

    s: float
    ambient_n: int
    lower: float
    upper: float
    normalized_lower: float
    normalized_upper: float
    window_trace: list[tuple[float, float]] = field(repr=False)  # (eps, q)
    verdict: str = VERDICT_INCONCLUSIVE
    window_decades: float = 2.0

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def normalized_midpoint(self) -> float:
        return 0.5 * (self.normalized_lower + self.normalized_upper)


def _collect(f: TubeFunction, sched: EpsSchedule) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the tube over the schedule, validating every point."""
    eps = sched.values
    meas = np.empty_like(eps)
    for i, e in enumerate(eps):
        v, err = f.eval_with_error(float(e))
        if not math.isfinite(v) or v <= 0.0:
            raise DataError(
                f"tube evaluation at eps = {e!r} returned unusable value {v!r}",
                eps=float(e),
            )
        if not f.deterministic and err > MAX_STOCHASTIC_NOISE * v:
            raise DomainError(
                f"stochastic tube too noisy at eps = {e!r}: "
                f"stderr {err:.3e} exceeds 1% of value {v:.3e}"
            )
        meas[i] = v
    return eps, meas


def box_dimension_fit(f: TubeFunction, sched: EpsSchedule) -> DimensionFit:
    """Fit meas ~ C * eps^(N-d) by least squares on the log-log trace."""
    eps, meas = _collect(f, sched)
    if eps.size < 3:
        raise DomainError("dimension fit needs at least 3 schedule points")
    x = np.log(eps)
    y = np.log(meas)
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    residual = float(np.max(np.abs(resid)))
    dof = eps.size - 2
    se = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 else math.inf
    ci = float(stats.t.ppf(0.975, dof)) * se if dof > 0 else math.inf
    return DimensionFit(
        ambient_n=f.ambient_n,
        fitted_d=f.ambient_n - slope,
        ci_halfwidth=ci,
        residual=residual,
        trace=[(float(a), float(b)) for a, b in zip(x, y)],
    )


def _window_mask(eps: np.ndarray, window_decades: float) -> np.ndarray:
    top = eps[-1] * 10.0**window_decades
    return eps <= top * (1.0 + 1e-9)


def content_estimate(
    f: TubeFunction,
    s: float,
    sched: EpsSchedule,
    window_decades: float = 2.0,
    *,
    measurability_rel_tol: float | None = None,
    zero_floor: float = DEFAULT_ZERO_FLOOR,
    divergence_per_decade: float = DEFAULT_DIVERGENCE_PER_DECADE,
) -> ContentEstimate:
    """Windowed lower/upper s-dimensional content of the set behind ``f``."""
    if not math.isfinite(s) or s < 0.0 or s > f.ambient_n:
        raise DomainError(f"s must lie in [0, {f.ambient_n}], got {s!r}")
    if window_decades <= 0.0:
        raise DomainError(f"window_decades must be positive, got {window_decades!r}")
    eps, meas = _collect(f, sched)
    q = meas / eps ** (f.ambient_n - s)
    mask = _window_mask(eps, window_decades)
    q_win = q[mask]
    eps_win = eps[mask]
    lower = float(q_win.min())
    upper = float(q_win.max())
    norm = gamma_ball(f.ambient_n - s)
    if measurability_rel_tol is None:
        measurability_rel_tol = (
            DEFAULT_MEASURABILITY_RTOL
            if f.deterministic
            else DEFAULT_MEASURABILITY_RTOL_STOCHASTIC
        )
    est = ContentEstimate(
        s=float(s),
        ambient_n=f.ambient_n,
        lower=lower,
        upper=upper,
        normalized_lower=lower / norm,
        normalized_upper=upper / norm,
        window_trace=[(float(e), float(v)) for e, v in zip(eps_win, q_win)],
        window_decades=float(window_decades),
    )
    est.verdict = measurability_verdict(
        est,
        measurability_rel_tol,
        zero_floor=zero_floor,
        divergence_per_decade=divergence_per_decade,
    )
    return est


def _per_decade_rate(eps: np.ndarray, q: np.ndarray) -> float:
    """Geometric drift of q per decade toward the eps -> 0 end."""
    decades = math.log10(eps[0] / eps[-1])
    return float((q[-1] / q[0]) ** (1.0 / decades))


def measurability_verdict(
    est: ContentEstimate,
    rel_tol: float,
    *,
    zero_floor: float = DEFAULT_ZERO_FLOOR,
    divergence_per_decade: float = DEFAULT_DIVERGENCE_PER_DECADE,
) -> str:
    """Classify a windowed content estimate.

    A strictly monotone window drifting faster than
    ``divergence_per_decade`` is degenerate (to zero for decay, to
    infinity for growth) provided the drift rate is stable across the
    two halves of the window: a pure power law drifts at a constant
    rate, whereas a transient approaching a finite positive limit
    decelerates and must not be classified as degenerate.  Otherwise the
    window max/min ratio against ``rel_tol`` separates measurable from
    nondegenerate.
    """
    if not math.isfinite(rel_tol) or rel_tol <= 0.0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}")
    trace = est.window_trace
    if not trace:
        return VERDICT_INCONCLUSIVE
    eps = np.array([p[0] for p in trace])
    q = np.array([p[1] for p in trace])
    lower = float(q.min())
    upper = float(q.max())
    if upper < zero_floor:
        return VERDICT_DEGENERATE_ZERO
    if eps.size < 2 or eps[0] <= eps[-1]:
        return VERDICT_INCONCLUSIVE

    rate = _per_decade_rate(eps, q)
    diffs = np.diff(q)
    increasing = bool(np.all(diffs > 0.0))
    decreasing = bool(np.all(diffs < 0.0))
    grow = 1.0 + divergence_per_decade

    if eps.size >= 4:
        mid = eps.size // 2
        rate_outer = _per_decade_rate(eps[: mid + 1], q[: mid + 1])
        rate_inner = _per_decade_rate(eps[mid:], q[mid:])
        if decreasing:
            # Decay that slows down toward small eps is a transient.
            stable = rate_inner <= rate_outer * grow
        elif increasing:
            stable = rate_inner >= rate_outer / grow
        else:
            stable = True
    else:
        stable = True

    if decreasing and rate < 1.0 / grow and stable:
        return VERDICT_DEGENERATE_ZERO
    if increasing and rate > grow and stable:
        return VERDICT_DEGENERATE_INFINITE
    if lower > 0.0 and upper / lower <= 1.0 + rel_tol:
        return VERDICT_MEASURABLE
    return VERDICT_NONDEGENERATE
