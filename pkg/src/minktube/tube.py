"""Tube-volume backends and the dimension-lift recursion.

A :class:`TubeFunction` packages an ambient dimension N with a map from
eps > 0 to the Lebesgue measure of the eps-neighborhood of a fixed set
in R^N.  The measure in R^(N+1) of a set lying in the hyperplane
{last coordinate = 0} satisfies the exact recursion

    meas_{N+1}(eps) = 2 * int_0^eps meas_N(sqrt(eps^2 - y^2)) dy,

which :func:`lift_tube` evaluates by adaptive quadrature after the
substitution y = eps*sin(t) (inner radius eps*cos(t), integrand smooth
at both endpoints for power-law-bounded tubes).  Stacking a set with a
unit interval obeys

    meas_{N+1}((U x [0,1])_eps) = meas_N(U_eps) + meas_{N+1}(U_eps),

implemented by :func:`product_with_unit_interval`.

Evaluations are memoized per instance keyed by the exact eps value, so
repeated probes of the same schedule are cheap; evaluation is otherwise
pure and reentrant.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import DomainError, UnsupportedError
from .intervals import IntervalUnion
from .quadrature import integrate_adaptive

#: Default relative tolerance for lift quadrature.
DEFAULT_LIFT_TOL = 1e-10

DETERMINISTIC_KINDS = ("exact_1d", "lifted", "product", "grid")
LIFTABLE_KINDS = ("exact_1d", "lifted", "product")


class TubeFunction:
    """Ambient dimension plus eps -> tube volume, with an error model.

    ``fn(eps)`` must return ``(value, abs_error)`` where ``abs_error``
    bounds (deterministic kinds) or estimates one standard error of
    (``monte_carlo``) the evaluation.  Values are memoized keyed by the
    exact floating-point eps.
    """

    __slots__ = ("ambient_n", "kind", "label", "rel_tol_chain", "_fn", "_memo")

    def __init__(
        self,
        ambient_n: int,
        kind: str,
        fn: Callable[[float], tuple[float, float]],
        *,
        rel_tol_chain: float = 0.0,
        label: str = "",
    ):
        if ambient_n < 1:
            raise DomainError(f"ambient_n must be >= 1, got {ambient_n}")
        self.ambient_n = int(ambient_n)
        self.kind = kind
        self.label = label or kind
        self.rel_tol_chain = rel_tol_chain
        self._fn = fn
        self._memo: dict[float, tuple[float, float]] = {}

    @property
    def deterministic(self) -> bool:
        return self.kind != "monte_carlo"

    def eval_with_error(self, eps: float) -> tuple[float, float]:
        if not math.isfinite(eps) or eps < 0.0:
            raise DomainError(f"eps must be >= 0, got {eps!r}")
        hit = self._memo.get(eps)
        if hit is None:
            hit = self._fn(eps)
            self._memo[eps] = hit
        return hit

    def eval(self, eps: float) -> float:
        return self.eval_with_error(eps)[0]

    __call__ = eval

    def __repr__(self) -> str:
        return f"TubeFunction(n={self.ambient_n}, kind={self.kind!r}, label={self.label!r})"


def exact_tube(u: IntervalUnion, label: str = "") -> TubeFunction:
    """Exact 1D tube function of an interval union (rounding-level error)."""

    def fn(eps: float) -> tuple[float, float]:
        v = u.tube_measure(eps)
        return v, 1e-14 * abs(v)

    return TubeFunction(1, "exact_1d", fn, label=label or f"exact({u.count} intervals)")


def lift_tube(f: TubeFunction, tol: float = DEFAULT_LIFT_TOL) -> TubeFunction:
    """Tube function one ambient dimension up, via the lift recursion.

    The integral is evaluated adaptively to relative tolerance ``tol``;
    the returned error model chains the inner function's tolerance.
    Only deterministic tube kinds that are exact or quadrature-backed can
    be lifted.
    """
    if f.kind not in LIFTABLE_KINDS:
        raise UnsupportedError(
            f"lift_tube supports kinds {LIFTABLE_KINDS}, got {f.kind!r}"
        )
    if not (math.isfinite(tol) and tol > 0.0):
        raise DomainError(f"tol must be positive, got {tol!r}")

    half_pi = math.pi / 2.0

    def fn(eps: float) -> tuple[float, float]:
        if eps == 0.0:
            return 0.0, 0.0

        def integrand(t: float) -> float:
            c = math.cos(t)
            return 2.0 * eps * c * f.eval(eps * c)

        res = integrate_adaptive(integrand, 0.0, half_pi, rel_tol=tol)
        return res.value, res.error + f.rel_tol_chain * abs(res.value)

    return TubeFunction(
        f.ambient_n + 1,
        "lifted",
        fn,
        rel_tol_chain=f.rel_tol_chain + tol,
        label=f"lift({f.label})",
    )


def product_with_unit_interval(
    f: TubeFunction, tol: float = DEFAULT_LIFT_TOL
) -> TubeFunction:
    """Tube function of U x [0, 1] in R^(N+1).

    Uses the decomposition of the stacked neighborhood into the prism
    over the base tube plus the lifted tube of the base set.
    """
    if f.kind not in LIFTABLE_KINDS:
        raise UnsupportedError(
            f"product_with_unit_interval supports kinds {LIFTABLE_KINDS}, got {f.kind!r}"
        )
    lifted = lift_tube(f, tol)

    def fn(eps: float) -> tuple[float, float]:
        base_v, base_e = f.eval_with_error(eps)
        lift_v, lift_e = lifted.eval_with_error(eps)
        return base_v + lift_v, base_e + lift_e

    return TubeFunction(
        f.ambient_n + 1,
        "product",
        fn,
        rel_tol_chain=f.rel_tol_chain + tol,
        label=f"product({f.label} x [0,1])",
    )
