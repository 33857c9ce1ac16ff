"""Experiment harness for ambient-space behavior of Minkowski contents.

Checks performed, each on windowed estimates with explicit error bars:

* ``embedding_report`` — for a measurable set the normalized content is
  unchanged by embedding R^N -> R^(N+1): the ratio of normalized
  midpoints must sit at 1 within tolerance, with measurable verdicts on
  both sides.
* ``sandwich_check`` — the two-sided ordering that holds for any bounded
  set: normalized lower content cannot drop and normalized upper content
  cannot grow under the embedding.
* ``coarse_bounds_check`` — the cruder product-derived constants
  2^(-(N-1-s)/2) and 2 on raw contents, plus how much tighter the
  ball-volume ratio is.
* ``product_inequality_check`` — Cartesian-product content bounds with
  constant 2^(-(M+N-s-r)/4).
* ``extremality_check`` — over a family of sets, embedding ratios of raw
  lower/upper contents never cross the ball-volume ratio, and measurable
  members attain it.

Two open questions are deliberately probed, never asserted: whether
measurability one dimension up forces measurability below, and whether
the lower/upper content ratios are invariant for non-measurable sets.
The reports expose the observed numbers in ``probe`` fields with no
pass/fail semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .ballvol import GammaRatio, gamma_ball, gamma_ratio
from .errors import DomainError, UnsupportedError
from .estimate import (
    VERDICT_MEASURABLE,
    ContentEstimate,
    EpsSchedule,
    box_dimension_fit,
    content_estimate,
)
from .cloud import PointCloud, grid_tube
from .setspec import Realization, SetSpec, realize
from .tube import DEFAULT_LIFT_TOL, TubeFunction, lift_tube, product_with_unit_interval

DEFAULT_INVARIANCE_TOL = 0.02


def _estimate_bar(tube: TubeFunction, est: ContentEstimate) -> float:
    """Worst backend error over the window, in q(eps) units."""
    worst = 0.0
    for eps, _q in est.window_trace:
        _v, e = tube.eval_with_error(eps)
        worst = max(worst, e / eps ** (tube.ambient_n - est.s))
    return worst


def _bar_with_spread(tube: TubeFunction, est: ContentEstimate) -> float:
    """Error bar for window quantities: backend error plus window spread.

    The spread term absorbs finite-scale artifacts (truncation drift,
    oscillation phase) that the idealized limit inequalities do not see.
    """
    return _estimate_bar(tube, est) + (est.upper - est.lower)


def _content_pair(
    base: TubeFunction,
    s: float,
    sched: EpsSchedule,
    *,
    quad_tol: float,
    window_decades: float,
    measurability_rel_tol: float | None,
) -> tuple[TubeFunction, ContentEstimate, ContentEstimate, float, float]:
    lifted = lift_tube(base, quad_tol)
    est_n = content_estimate(
        base, s, sched, window_decades, measurability_rel_tol=measurability_rel_tol
    )
    est_n1 = content_estimate(
        lifted, s, sched, window_decades, measurability_rel_tol=measurability_rel_tol
    )
    return lifted, est_n, est_n1, _bar_with_spread(base, est_n), _bar_with_spread(lifted, est_n1)


@dataclass
class EmbeddingReport:
    spec: SetSpec
    s: float
    base_ambient: int
    est_n: ContentEstimate
    est_n1: ContentEstimate
    normalized_ratio: float
    gamma_ratio_used: GammaRatio
    tolerance: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "s": self.s,
            "base_ambient": self.base_ambient,
            "normalized_ratio": self.normalized_ratio,
            "gamma_ratio": self.gamma_ratio_used.value,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "estimates": {
                "base": _est_dict(self.est_n),
                "lifted": _est_dict(self.est_n1),
            },
        }


def _est_dict(est: ContentEstimate) -> dict[str, Any]:
    return {
        "s": est.s,
        "ambient_n": est.ambient_n,
        "lower": est.lower,
        "upper": est.upper,
        "normalized_lower": est.normalized_lower,
        "normalized_upper": est.normalized_upper,
        "verdict": est.verdict,
        "window_decades": est.window_decades,
    }


def embedding_report(
    spec: SetSpec,
    s: float,
    sched: EpsSchedule,
    tol: float = DEFAULT_INVARIANCE_TOL,
    *,
    quad_tol: float = DEFAULT_LIFT_TOL,
    window_decades: float = 2.0,
    measurability_rel_tol: float | None = None,
) -> EmbeddingReport:
    """Compare normalized contents of one set across ambient dimensions."""
    if not math.isfinite(tol) or tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    real = realize(spec, quad_tol=quad_tol)
    base = real.tube
    if not (0.0 <= s <= base.ambient_n):
        raise DomainError(f"s must lie in [0, {base.ambient_n}], got {s!r}")
    _lifted, est_n, est_n1, _b0, _b1 = _content_pair(
        base,
        s,
        sched,
        quad_tol=quad_tol,
        window_decades=window_decades,
        measurability_rel_tol=measurability_rel_tol,
    )
    ratio = est_n1.normalized_midpoint / est_n.normalized_midpoint
    passed = (
        abs(ratio - 1.0) <= tol
        and est_n.verdict == VERDICT_MEASURABLE
        and est_n1.verdict == VERDICT_MEASURABLE
    )
    return EmbeddingReport(
        spec=spec,
        s=float(s),
        base_ambient=base.ambient_n,
        est_n=est_n,
        est_n1=est_n1,
        normalized_ratio=ratio,
        gamma_ratio_used=gamma_ratio(base.ambient_n, s),
        tolerance=tol,
        passed=passed,
    )


@dataclass
class SandwichReport:
    """Normalized ordering lower_N <= lower_N1 <= upper_N1 <= upper_N."""

    spec: SetSpec
    s: float
    base_ambient: int
    normalized: tuple[float, float, float, float]  # (low_N, low_N1, up_N1, up_N)
    slacks: tuple[float, float, float]
    error_bars: tuple[float, float, float, float]
    ok: bool
    est_n: ContentEstimate = field(repr=False, default=None)
    est_n1: ContentEstimate = field(repr=False, default=None)
    probe: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        low_n, low_n1, up_n1, up_n = self.normalized
        return {
            "spec": self.spec.to_dict(),
            "s": self.s,
            "base_ambient": self.base_ambient,
            "normalized_lower_base": low_n,
            "normalized_lower_lifted": low_n1,
            "normalized_upper_lifted": up_n1,
            "normalized_upper_base": up_n,
            "slacks": list(self.slacks),
            "error_bars": list(self.error_bars),
            "ok": self.ok,
            "verdicts": {"base": self.est_n.verdict, "lifted": self.est_n1.verdict},
            "probe": dict(self.probe),
        }


def sandwich_check(
    spec: SetSpec,
    s: float,
    sched: EpsSchedule,
    *,
    quad_tol: float = DEFAULT_LIFT_TOL,
    window_decades: float = 2.0,
    measurability_rel_tol: float | None = None,
) -> SandwichReport:
    """Verify the normalized content ordering across the embedding."""
    real = realize(spec, quad_tol=quad_tol)
    base = real.tube
    if not (0.0 <= s <= base.ambient_n):
        raise DomainError(f"s must lie in [0, {base.ambient_n}], got {s!r}")
    _lifted, est_n, est_n1, bar_n, bar_n1 = _content_pair(
        base,
        s,
        sched,
        quad_tol=quad_tol,
        window_decades=window_decades,
        measurability_rel_tol=measurability_rel_tol,
    )
    g_n = gamma_ball(base.ambient_n - s)
    g_n1 = gamma_ball(base.ambient_n + 1 - s)
    low_n = est_n.lower / g_n
    up_n = est_n.upper / g_n
    low_n1 = est_n1.lower / g_n1
    up_n1 = est_n1.upper / g_n1
    nbar_n = bar_n / g_n + 1e-14 * up_n
    nbar_n1 = bar_n1 / g_n1 + 1e-14 * up_n1
    slacks = (low_n1 - low_n, up_n1 - low_n1, up_n - up_n1)
    bars = (nbar_n + nbar_n1, 2.0 * nbar_n1, nbar_n + nbar_n1)
    ok = all(sl >= -b for sl, b in zip(slacks, bars))
    # Report-only probe of the open questions: how far the lower/upper
    # normalized contents individually moved under the embedding.
    probe = {
        "lower_normalized_ratio": low_n1 / low_n if low_n > 0 else math.inf,
        "upper_normalized_ratio": up_n1 / up_n if up_n > 0 else math.inf,
        "measurable_above_not_below": float(
            est_n1.verdict == VERDICT_MEASURABLE
            and est_n.verdict != VERDICT_MEASURABLE
        ),
    }
    return SandwichReport(
        spec=spec,
        s=float(s),
        base_ambient=base.ambient_n,
        normalized=(low_n, low_n1, up_n1, up_n),
        slacks=slacks,
        error_bars=(nbar_n, nbar_n1, nbar_n1, nbar_n),
        ok=ok,
        est_n=est_n,
        est_n1=est_n1,
        probe=probe,
    )


@dataclass
class CoarseBoundsReport:
    """Raw-content bounds with the crude constants 2^(-(N-1-s)/2) and 2."""

    spec: SetSpec
    s: float
    base_ambient: int
    lower_constant: float
    raw: tuple[float, float, float, float]  # (low_N, low_N1, up_N1, up_N)
    slacks: tuple[float, float, float]
    ok: bool
    gamma_ratio_value: float
    constant_slack_lower: float  # gamma ratio - 2^(-(N-1-s)/2) >= 0
    constant_slack_upper: float  # 2 - gamma ratio >= 0

    def to_dict(self) -> dict[str, Any]:
        low_n, low_n1, up_n1, up_n = self.raw
        return {
            "spec": self.spec.to_dict(),
            "s": self.s,
            "base_ambient": self.base_ambient,
            "lower_constant": self.lower_constant,
            "raw_lower_base": low_n,
            "raw_lower_lifted": low_n1,
            "raw_upper_lifted": up_n1,
            "raw_upper_base": up_n,
            "slacks": list(self.slacks),
            "ok": self.ok,
            "gamma_ratio": self.gamma_ratio_value,
            "constant_slack_lower": self.constant_slack_lower,
            "constant_slack_upper": self.constant_slack_upper,
        }


def coarse_bounds_check(
    spec: SetSpec,
    s: float,
    sched: EpsSchedule,
    *,
    quad_tol: float = DEFAULT_LIFT_TOL,
    window_decades: float = 2.0,
) -> CoarseBoundsReport:
    """Check the crude ambient-space inequalities on raw contents."""
    real = realize(spec, quad_tol=quad_tol)
    base = real.tube
    n = base.ambient_n
    if not (0.0 <= s <= n):
        raise DomainError(f"s must lie in [0, {n}], got {s!r}")
    _lifted, est_n, est_n1, bar_n, bar_n1 = _content_pair(
        base,
        s,
        sched,
        quad_tol=quad_tol,
        window_decades=window_decades,
        measurability_rel_tol=None,
    )
    c_low = 2.0 ** (-(n - 1.0 - s) / 2.0)
    slacks = (
        est_n1.lower - c_low * est_n.lower,
        est_n1.upper - est_n1.lower,
        2.0 * est_n.upper - est_n1.upper,
    )
    bars = (bar_n1 + c_low * bar_n, 2.0 * bar_n1, bar_n1 + 2.0 * bar_n)
    ok = all(sl >= -b for sl, b in zip(slacks, bars))
    g = gamma_ratio(n, s).value
    return CoarseBoundsReport(
        spec=spec,
        s=float(s),
        base_ambient=n,
        lower_constant=c_low,
        raw=(est_n.lower, est_n1.lower, est_n1.upper, est_n.upper),
        slacks=slacks,
        ok=ok,
        gamma_ratio_value=g,
        constant_slack_lower=g - c_low,
        constant_slack_upper=2.0 - g,
    )


def _is_unit_interval(real: Realization) -> bool:
    u = real.union
    return (
        u is not None
        and u.count == 1
        and abs(u.hull_length - 1.0) <= 1e-15
    )


def _degenerate_points(real: Realization) -> bool:
    u = real.union
    if u is None:
        return False
    return bool((u.hi == u.lo).all())


@dataclass
class ProductReport:
    spec_a: SetSpec
    spec_b: SetSpec
    s: float
    r: float
    constant: float
    bounds: tuple[float, float]  # (lower product bound, upper product bound)
    product_raw: tuple[float, float]  # (lower, upper) content of A x B
    slacks: tuple[float, float, float]
    ok: bool
    route: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec_a": self.spec_a.to_dict(),
            "spec_b": self.spec_b.to_dict(),
            "s": self.s,
            "r": self.r,
            "constant": self.constant,
            "lower_bound": self.bounds[0],
            "upper_bound": self.bounds[1],
            "product_lower": self.product_raw[0],
            "product_upper": self.product_raw[1],
            "slacks": list(self.slacks),
            "ok": self.ok,
            "route": self.route,
        }


def product_inequality_check(
    spec_a: SetSpec,
    spec_b: SetSpec,
    s: float,
    r: float,
    sched: EpsSchedule,
    *,
    quad_tol: float = DEFAULT_LIFT_TOL,
    window_decades: float = 2.0,
    grid_resolution_factor: float = 16.0,
    max_product_points: int = 200_000,
) -> ProductReport:
    """Check Cartesian-product content bounds on windowed estimates.

    Supported configurations: B a single unit-length interval (product
    tube via the stack identity), or both A and B degenerate point sets
    (product tube via the 2D grid backend).
    """
    real_a = realize(spec_a, quad_tol=quad_tol)
    real_b = realize(spec_b, quad_tol=quad_tol)
    tube_a = real_a.tube
    tube_b = real_b.tube
    m = tube_a.ambient_n
    n = tube_b.ambient_n
    if not (0.0 <= s <= m) or not (0.0 <= r <= n):
        raise DomainError(f"need 0 <= s <= {m} and 0 <= r <= {n}")

    if _is_unit_interval(real_b):
        product = product_with_unit_interval(tube_a, quad_tol)
        route = "stack_unit_interval"
    elif _degenerate_points(real_a) and _degenerate_points(real_b):
        xs = real_a.union.lo
        ys = real_b.union.lo
        if xs.size * ys.size > max_product_points:
            raise UnsupportedError(
                f"product cloud of {xs.size * ys.size} points exceeds "
                f"{max_product_points}"
            )
        grid_pts = np.stack(
            [np.repeat(xs, ys.size), np.tile(ys, xs.size)], axis=1
        )
        product = grid_tube(PointCloud(grid_pts), grid_resolution_factor)
        route = "grid_point_product"
    else:
        raise UnsupportedError(
            "product configurations supported: B = unit interval, or both "
            "A and B degenerate point sets"
        )

    est_a = content_estimate(tube_a, s, sched, window_decades)
    est_b = content_estimate(tube_b, r, sched, window_decades)
    est_p = content_estimate(product, s + r, sched, window_decades)
    bar_a = _bar_with_spread(tube_a, est_a)
    bar_b = _bar_with_spread(tube_b, est_b)
    bar_p = _bar_with_spread(product, est_p)

    const = 2.0 ** (-(m + n - s - r) / 4.0)
    lower_bound = const * est_a.lower * est_b.lower
    upper_bound = est_a.upper * est_b.upper
    lower_bar = const * (est_a.lower * bar_b + est_b.lower * bar_a)
    upper_bar = est_a.upper * bar_b + est_b.upper * bar_a
    slacks = (
        est_p.lower - lower_bound,
        est_p.upper - est_p.lower,
        upper_bound - est_p.upper,
    )
    bars = (bar_p + lower_bar, 2.0 * bar_p, bar_p + upper_bar)
    ok = all(sl >= -b for sl, b in zip(slacks, bars))
    return ProductReport(
        spec_a=spec_a,
        spec_b=spec_b,
        s=float(s),
        r=float(r),
        constant=const,
        bounds=(lower_bound, upper_bound),
        product_raw=(est_p.lower, est_p.upper),
        slacks=slacks,
        ok=ok,
        route=route,
    )


@dataclass
class ExtremalityEntry:
    spec: SetSpec
    s: float
    fitted_d: float
    ratio_lower: float
    ratio_upper: float
    gamma_ratio_value: float
    measurable: bool
    attains: bool
    ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "s": self.s,
            "fitted_d": self.fitted_d,
            "ratio_lower": self.ratio_lower,
            "ratio_upper": self.ratio_upper,
            "gamma_ratio": self.gamma_ratio_value,
            "measurable": self.measurable,
            "attains": self.attains,
            "ok": self.ok,
        }


@dataclass
class ExtremalityReport:
    s: float
    tolerance: float
    entries: list[ExtremalityEntry]
    ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "tolerance": self.tolerance,
            "entries": [e.to_dict() for e in self.entries],
            "ok": self.ok,
        }


def extremality_check(
    specs: list[SetSpec],
    s: float,
    sched_for: "dict[int, EpsSchedule] | EpsSchedule",
    tol: float = DEFAULT_INVARIANCE_TOL,
    *,
    quad_tol: float = DEFAULT_LIFT_TOL,
    window_decades: float = 2.0,
) -> ExtremalityReport:
    """Embedding ratios of raw contents over a family of sets.

    Each set's lower-content ratio must stay above the ball-volume ratio
    minus ``tol`` and its upper-content ratio below it plus ``tol``;
    sets with a measurable verdict must attain the ratio within ``tol``.
    ``sched_for`` may be a single schedule or a mapping from the index of
    the spec to its schedule.
    """
    entries = []
    for i, spec in enumerate(specs):
        sched = sched_for[i] if isinstance(sched_for, dict) else sched_for
        real = realize(spec, quad_tol=quad_tol)
        base = real.tube
        fit = box_dimension_fit(base, sched)
        _lifted, est_n, est_n1, _b0, _b1 = _content_pair(
            base,
            s,
            sched,
            quad_tol=quad_tol,
            window_decades=window_decades,
            measurability_rel_tol=None,
        )
        g = gamma_ratio(base.ambient_n, s).value
        ratio_lower = est_n1.lower / est_n.lower
        ratio_upper = est_n1.upper / est_n.upper
        measurable = est_n.verdict == VERDICT_MEASURABLE
        attains = abs(ratio_lower - g) <= tol and abs(ratio_upper - g) <= tol
        ok = ratio_lower >= g - tol and ratio_upper <= g + tol
        if measurable:
            ok = ok and attains
        entries.append(
            ExtremalityEntry(
                spec=spec,
                s=float(s),
                fitted_d=fit.fitted_d,
                ratio_lower=ratio_lower,
                ratio_upper=ratio_upper,
                gamma_ratio_value=g,
                measurable=measurable,
                attains=attains,
                ok=ok,
            )
        )
    return ExtremalityReport(
        s=float(s),
        tolerance=tol,
        entries=entries,
        ok=all(e.ok for e in entries),
    )


def constants_grid(
    ambient_values: tuple[int, ...] = (1, 2, 3), step: float = 0.05
) -> list[dict[str, float]]:
    """Pure-arithmetic comparison of the crude and ball-volume constants.

    For every N and s on the grid: 2^(-(N-1-s)/2) <= ball ratio <= 2,
    with strict inequalities away from s = N.
    """
    rows = []
    for n in ambient_values:
        k = 0
        while True:
            s = k * step
            if s > n + 1e-12:
                break
            s = min(s, float(n))
            g = gamma_ratio(n, s).value
            c_low = 2.0 ** (-(n - 1.0 - s) / 2.0)
            rows.append(
                {
                    "ambient_n": float(n),
                    "s": s,
                    "coarse_lower": c_low,
                    "gamma_ratio": g,
                    "coarse_upper": 2.0,
                    "slack_lower": g - c_low,
                    "slack_upper": 2.0 - g,
                }
            )
            k += 1
    return rows
