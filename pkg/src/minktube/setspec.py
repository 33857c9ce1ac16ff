"""Declarative set descriptions and their realization to tube functions.

A :class:`SetSpec` is the unit of experiment configuration: it names one
of the supported constructions (point lists, interval unions, the
n^-a string, the x - x^alpha orbit, the middle-thirds Cantor set, or an
inner set stacked with [0, 1]) together with its parameters.  Specs
round-trip losslessly through plain dictionaries, which is what the
YAML configuration layer serializes.

Realization produces the exact tube function for the set plus the
metadata estimators need: the hull length (for default schedule tops)
and the scale below which a finite truncation stops imitating the
infinite construction (smallest gap / 2 heuristic; used for default
schedule floors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .errors import ConfigError, DomainError, ResolutionError
from .intervals import (
    CANTOR_DEPTH_CAP,
    IntervalUnion,
    a_string,
    alpha_orbit,
    cantor_cover_at_level,
    cantor_level_for,
    make_intervals,
    make_points,
)
from .tube import DEFAULT_LIFT_TOL, TubeFunction, exact_tube, product_with_unit_interval

KINDS = (
    "points",
    "intervals",
    "a_string",
    "alpha_orbit",
    "cantor",
    "product_unit_interval",
)


@dataclass(frozen=True)
class SetSpec:
    kind: str
    xs: tuple[float, ...] | None = None
    intervals: tuple[tuple[float, float], ...] | None = None
    a: float | None = None
    alpha: float | None = None
    x0: float | None = None
    n_terms: int | None = None
    depth_cap: int | None = None
    inner: "SetSpec | None" = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown set kind {self.kind!r}; expected one of {KINDS}")
        need = {
            "points": ("xs",),
            "intervals": ("intervals",),
            "a_string": ("a", "n_terms"),
            "alpha_orbit": ("alpha", "x0", "n_terms"),
            "cantor": (),
            "product_unit_interval": ("inner",),
        }[self.kind]
        for name in need:
            if getattr(self, name) is None:
                raise ConfigError(f"set kind {self.kind!r} requires field {name!r}")

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.xs is not None:
            out["xs"] = list(self.xs)
        if self.intervals is not None:
            out["intervals"] = [list(p) for p in self.intervals]
        for name in ("a", "alpha", "x0", "n_terms", "depth_cap"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.inner is not None:
            out["inner"] = self.inner.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SetSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError(f"a set spec must be a mapping with a 'kind', got {d!r}")
        known = {
            "kind",
            "xs",
            "intervals",
            "a",
            "alpha",
            "x0",
            "n_terms",
            "depth_cap",
            "inner",
            "schedule",  # consumed by the config layer
        }
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown set spec fields: {sorted(extra)}")
        kw: dict[str, Any] = {"kind": d["kind"]}
        if "xs" in d:
            kw["xs"] = tuple(float(x) for x in d["xs"])
        if "intervals" in d:
            kw["intervals"] = tuple(
                (float(p[0]), float(p[1])) for p in d["intervals"]
            )
        for name in ("a", "alpha", "x0"):
            if name in d:
                kw[name] = float(d[name])
        for name in ("n_terms", "depth_cap"):
            if name in d:
                kw[name] = int(d[name])
        if "inner" in d:
            kw["inner"] = cls.from_dict(d["inner"])
        return cls(**kw)


@dataclass
class Realization:
    """A realized set: its tube function plus estimator metadata."""

    spec: SetSpec
    tube: TubeFunction
    union: IntervalUnion | None
    hull_length: float
    truncation_eps: float
    notes: tuple[str, ...] = ()


def _cantor_tube(depth_cap: int) -> TubeFunction:
    """Exact tube function of the middle-thirds Cantor set.

    For each eps the shallowest adequate cover already reproduces the
    set's eps-neighborhood exactly; a single deepest-so-far cover is
    kept and reused, since deeper covers remain exact for larger eps.
    """
    state: dict[str, Any] = {"level": -1, "cover": None}

    def fn(eps: float) -> tuple[float, float]:
        if eps <= 0.0:
            raise DomainError(f"cantor tube needs eps > 0, got {eps!r}")
        if eps >= 1.0:
            k = 0
        else:
            k = cantor_level_for(eps, depth_cap)
        if k > state["level"]:
            state["cover"] = cantor_cover_at_level(k)
            state["level"] = k
        v = state["cover"].tube_measure(eps)
        return v, 1e-14 * v

    return TubeFunction(1, "exact_1d", fn, label=f"cantor(depth<= {depth_cap})")


def realize(spec: SetSpec, *, quad_tol: float = DEFAULT_LIFT_TOL) -> Realization:
    """Build the exact tube function (and metadata) for a set spec."""
    if spec.kind == "points":
        union = make_points(spec.xs)
    elif spec.kind == "intervals":
        union = make_intervals(spec.intervals)
    elif spec.kind == "a_string":
        union = a_string(spec.a, spec.n_terms)
    elif spec.kind == "alpha_orbit":
        union = alpha_orbit(spec.alpha, spec.x0, spec.n_terms)
    elif spec.kind == "cantor":
        cap = spec.depth_cap if spec.depth_cap is not None else CANTOR_DEPTH_CAP
        if cap < 0 or cap > CANTOR_DEPTH_CAP:
            raise ResolutionError(
                f"cantor depth cap {cap} outside [0, {CANTOR_DEPTH_CAP}]"
            )
        return Realization(
            spec=spec,
            tube=_cantor_tube(cap),
            union=None,
            hull_length=1.0,
            truncation_eps=3.0 ** -(cap + 1) / 2.0,
        )
    elif spec.kind == "product_unit_interval":
        base = realize(spec.inner, quad_tol=quad_tol)
        tube = product_with_unit_interval(base.tube, quad_tol)
        return Realization(
            spec=spec,
            tube=tube,
            union=None,
            hull_length=max(base.hull_length, 1.0),
            truncation_eps=base.truncation_eps,
            notes=base.notes,
        )
    else:  # pragma: no cover - guarded by SetSpec validation
        raise ConfigError(f"unknown kind {spec.kind!r}")

    gap = union.smallest_gap
    truncation = 0.0
    if spec.kind in ("a_string", "alpha_orbit") and gap is not None:
        truncation = gap / 2.0
    return Realization(
        spec=spec,
        tube=exact_tube(union, label=f"{spec.kind}"),
        union=union,
        hull_length=union.hull_length,
        truncation_eps=truncation,
        notes=union.notes,
    )
