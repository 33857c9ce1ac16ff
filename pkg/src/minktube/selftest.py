"""Numerical self-test: quadrature against closed forms.

Three blocks, each of which exercises an independent pair of routes:

* the dimension-lift integral of pure power laws against its Beta/Gamma
  closed form gamma_ball(N+1-s)/gamma_ball(N-s) * eps^(N+1-s), over a
  grid of ambient dimensions, exponents and radii;
* tabulated ball volumes and ratio identities (including the fact that
  the ratio depends on N and s only through N - s);
* the stacked-product decomposition, which must reproduce base + lift
  to floating-point accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .ballvol import gamma_ball, gamma_ratio, power_law_lift_integral
from .intervals import a_string, make_intervals, make_points
from .tube import exact_tube, lift_tube, product_with_unit_interval

#: Absolute quadrature tolerance used for the grid rows.
GRID_QUAD_TOL = 1e-12
#: Agreement tolerance: absolute below 1, relative above.
GRID_CHECK_TOL = 1e-10


@dataclass
class SelftestRow:
    block: str
    label: str
    got: float
    want: float
    tol: float
    passed: bool

    @property
    def error(self) -> float:
        return abs(self.got - self.want)

    def to_dict(self) -> dict[str, Any]:
        return {
            "block": self.block,
            "label": self.label,
            "got": self.got,
            "want": self.want,
            "error": self.error,
            "tol": self.tol,
            "passed": self.passed,
        }


@dataclass
class SelftestReport:
    rows: list[SelftestRow]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list[SelftestRow]:
        return [r for r in self.rows if not r.passed]

    @property
    def max_error(self) -> float:
        return max(r.error for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "max_error": self.max_error,
            "rows": [r.to_dict() for r in self.rows],
        }

    def table(self) -> str:
        lines = [
            f"{'block':<14} {'check':<34} {'got':>22} {'want':>22} "
            f"{'error':>10} {'status':>7}"
        ]
        for r in self.rows:
            lines.append(
                f"{r.block:<14} {r.label:<34} {r.got:>22.15g} {r.want:>22.15g} "
                f"{r.error:>10.2e} {'pass' if r.passed else 'FAIL':>7}"
            )
        lines.append(
            f"{len(self.rows)} checks, max error {self.max_error:.2e}, "
            f"{'all pass' if self.ok else f'{len(self.failures)} FAILURES'}"
        )
        return "\n".join(lines)


def _row(block: str, label: str, got: float, want: float, tol: float) -> SelftestRow:
    return SelftestRow(
        block=block, label=label, got=got, want=want, tol=tol,
        passed=abs(got - want) <= tol,
    )


def _quarter_steps(n: int) -> list[float]:
    return [k * 0.25 for k in range(4 * n + 1)]


def run_selftest(quad_tol: float = GRID_QUAD_TOL) -> SelftestReport:
    rows: list[SelftestRow] = []

    # Block 1: power-law lift quadrature vs closed form.
    for n in (1, 2, 3):
        for s in _quarter_steps(n):
            for eps in (1.0, 0.1, 0.01):
                got = power_law_lift_integral(n, s, eps, quad_tol)
                want = gamma_ratio(n, s).value * eps ** (n + 1 - s)
                tol = GRID_CHECK_TOL * max(1.0, eps ** (n + 1 - s))
                rows.append(
                    _row("lift_integral", f"N={n} s={s:g} eps={eps:g}", got, want, tol)
                )

    # Block 2: ball-volume table and ratio identities.
    for k, want in ((0.0, 1.0), (1.0, 2.0), (2.0, math.pi), (3.0, 4.0 * math.pi / 3.0)):
        rows.append(_row("gamma_table", f"ball_vol({k:g})", gamma_ball(k), want, 1e-13))
    rows.append(
        _row("gamma_table", "ratio(1, 0) = pi/2", gamma_ratio(1, 0.0).value,
             math.pi / 2.0, 1e-13)
    )
    rows.append(
        _row("gamma_table", "ratio(1, 1) = 2", gamma_ratio(1, 1.0).value, 2.0, 1e-13)
    )
    for n in (1, 2):
        for s in (0.0, 0.5, 1.0):
            rows.append(
                _row(
                    "gamma_table",
                    f"ratio({n},{s:g}) = ratio({n + 1},{s + 1:g})",
                    gamma_ratio(n, s).value,
                    gamma_ratio(n + 1, s + 1.0).value,
                    1e-13,
                )
            )

    # Block 3: stacked product must equal base + lift.
    bases = {
        "point": exact_tube(make_points([0.0])),
        "segment": exact_tube(make_intervals([(0.0, 1.0)])),
        "a_string(1, 200)": exact_tube(a_string(1.0, 200)),
    }
    for name, base in bases.items():
        lifted = lift_tube(base, quad_tol)
        product = product_with_unit_interval(base, quad_tol)
        for eps in (1e-1, 1e-3, 1e-5):
            got = product.eval(eps)
            want = base.eval(eps) + lifted.eval(eps)
            rows.append(
                _row(
                    "product_identity",
                    f"{name} eps={eps:g}",
                    got,
                    want,
                    1e-12 * abs(want),
                )
            )

    return SelftestReport(rows=rows)
