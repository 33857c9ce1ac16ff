"""Experiment configuration: named sets, schedules, tolerances, seeds.

The on-disk format is a single YAML document; floats survive the
round-trip bit-exactly because they are rendered with ``repr`` (the
shortest representation that parses back to the same double).

Schedules may be given globally, per set, or omitted entirely; an
omitted schedule is derived from the realized set (top at one tenth of
the hull length, floor at the constructor-reported truncation scale,
eight points per decade), capped at four decades when the set has no
truncation scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import yaml

from .errors import ConfigError
from .estimate import EpsSchedule
from .setspec import Realization, SetSpec

DEFAULT_QUADRATURE_TOL = 1e-10
DEFAULT_MEASURABILITY_TOL = 0.02
DEFAULT_INVARIANCE_TOL = 0.02
DEFAULT_SEED = 20260809
DEFAULT_POINTS_PER_DECADE = 8
DEFAULT_WINDOW_DECADES = 2.0


@dataclass
class ScheduleParams:
    eps_max: float | None = None
    eps_min: float | None = None
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"points_per_decade": self.points_per_decade}
        if self.eps_max is not None:
            out["eps_max"] = self.eps_max
        if self.eps_min is not None:
            out["eps_min"] = self.eps_min
        return out

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScheduleParams":
        extra = set(d) - {"eps_max", "eps_min", "points_per_decade"}
        if extra:
            raise ConfigError(f"unknown schedule fields: {sorted(extra)}")
        return cls(
            eps_max=float(d["eps_max"]) if "eps_max" in d else None,
            eps_min=float(d["eps_min"]) if "eps_min" in d else None,
            points_per_decade=int(d.get("points_per_decade", DEFAULT_POINTS_PER_DECADE)),
        )


@dataclass
class Tolerances:
    quadrature: float = DEFAULT_QUADRATURE_TOL
    measurability: float = DEFAULT_MEASURABILITY_TOL
    invariance: float = DEFAULT_INVARIANCE_TOL

    def to_dict(self) -> dict[str, Any]:
        return {
            "quadrature": self.quadrature,
            "measurability": self.measurability,
            "invariance": self.invariance,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Tolerances":
        extra = set(d) - {"quadrature", "measurability", "invariance"}
        if extra:
            raise ConfigError(f"unknown tolerance fields: {sorted(extra)}")
        t = cls(
            quadrature=float(d.get("quadrature", DEFAULT_QUADRATURE_TOL)),
            measurability=float(d.get("measurability", DEFAULT_MEASURABILITY_TOL)),
            invariance=float(d.get("invariance", DEFAULT_INVARIANCE_TOL)),
        )
        for name, v in t.to_dict().items():
            if not (math.isfinite(v) and v > 0.0):
                raise ConfigError(f"tolerance {name!r} must be positive, got {v!r}")
        return t


@dataclass
class ExperimentConfig:
    sets: dict[str, SetSpec]
    set_schedules: dict[str, ScheduleParams] = field(default_factory=dict)
    schedule: ScheduleParams = field(default_factory=ScheduleParams)
    tolerances: Tolerances = field(default_factory=Tolerances)
    window_decades: float = DEFAULT_WINDOW_DECADES
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.sets:
            raise ConfigError("configuration needs at least one named set")
        if len(set(self.sets)) != len(self.sets):  # pragma: no cover
            raise ConfigError("set names must be unique")
        if self.window_decades <= 0.0:
            raise ConfigError("window_decades must be positive")

    def spec(self, name: str) -> SetSpec:
        try:
            return self.sets[name]
        except KeyError:
            raise ConfigError(
                f"no set named {name!r}; configured sets: {sorted(self.sets)}"
            ) from None

    def schedule_for(self, name: str, real: Realization) -> EpsSchedule:
        """Resolve the epsilon schedule for one set.

        Per-set parameters win over global ones; whatever is still
        missing is derived from the realized set.
        """
        params = self.set_schedules.get(name, self.schedule)
        eps_max = params.eps_max
        eps_min = params.eps_min
        if eps_max is None:
            hull = real.hull_length if real.hull_length > 0 else 1.0
            eps_max = hull / 10.0
        if eps_min is None:
            if real.truncation_eps > 0.0:
                eps_min = real.truncation_eps
            else:
                eps_min = eps_max * 1e-4
        return EpsSchedule(eps_max, eps_min, params.points_per_decade)

    def to_dict(self) -> dict[str, Any]:
        sets_out: dict[str, Any] = {}
        for name, spec in self.sets.items():
            entry = spec.to_dict()
            if name in self.set_schedules:
                entry["schedule"] = self.set_schedules[name].to_dict()
            sets_out[name] = entry
        return {
            "sets": sets_out,
            "schedule": self.schedule.to_dict(),
            "tolerances": self.tolerances.to_dict(),
            "window_decades": self.window_decades,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError(f"configuration must be a mapping, got {type(d).__name__}")
        extra = set(d) - {"sets", "schedule", "tolerances", "window_decades", "seed"}
        if extra:
            raise ConfigError(f"unknown configuration fields: {sorted(extra)}")
        raw_sets = d.get("sets")
        if not isinstance(raw_sets, dict) or not raw_sets:
            raise ConfigError("configuration needs a nonempty 'sets' mapping")
        sets: dict[str, SetSpec] = {}
        set_schedules: dict[str, ScheduleParams] = {}
        for name, entry in raw_sets.items():
            if not isinstance(entry, dict):
                raise ConfigError(f"set {name!r} must be a mapping")
            if "schedule" in entry:
                set_schedules[name] = ScheduleParams.from_dict(entry["schedule"])
            sets[name] = SetSpec.from_dict(entry)
        seed = int(d.get("seed", DEFAULT_SEED))
        if seed < 0 or seed >= 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {seed}")
        return cls(
            sets=sets,
            set_schedules=set_schedules,
            schedule=ScheduleParams.from_dict(d.get("schedule", {})),
            tolerances=Tolerances.from_dict(d.get("tolerances", {})),
            window_decades=float(d.get("window_decades", DEFAULT_WINDOW_DECADES)),
            seed=seed,
        )


class _ReprFloatDumper(yaml.SafeDumper):
    pass


def _repr_float(dumper: yaml.SafeDumper, value: float):
    if value != value or value in (math.inf, -math.inf):
        raise ConfigError(f"non-finite float {value!r} not allowed in configuration")
    return dumper.represent_scalar("tag:yaml.org,2002:float", repr(float(value)))


_ReprFloatDumper.add_representer(float, _repr_float)


def dump_config(config: ExperimentConfig) -> str:
    return yaml.dump(
        config.to_dict(), Dumper=_ReprFloatDumper, sort_keys=False, default_flow_style=False
    )


def load_config_text(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration is not valid YAML: {exc}") from exc
    return ExperimentConfig.from_dict(data)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path!r}: {exc}") from exc
    return load_config_text(text)


def default_config() -> ExperimentConfig:
    """The library of exemplar sets used by the command-line interface.

    Schedules are pinned per set so estimates sit inside the regime
    where each finite construction faithfully represents the infinite
    one (well above the truncation scale), at desk-scale runtimes.
    """
    sets = {
        "point": SetSpec(kind="points", xs=(0.0,)),
        "segment": SetSpec(kind="intervals", intervals=((0.0, 1.0),)),
        "a_string_1": SetSpec(kind="a_string", a=1.0, n_terms=1_000_000),
        "a_string_2": SetSpec(kind="a_string", a=2.0, n_terms=1_000_000),
        "alpha_orbit_2": SetSpec(
            kind="alpha_orbit", alpha=2.0, x0=0.5, n_terms=1_000_000
        ),
        "cantor": SetSpec(kind="cantor"),
        "a_string_tower": SetSpec(
            kind="product_unit_interval",
            inner=SetSpec(kind="a_string", a=1.0, n_terms=1_000_000),
        ),
    }
    set_schedules = {
        "point": ScheduleParams(eps_max=1e-3, eps_min=1e-11),
        "segment": ScheduleParams(eps_max=1e-3, eps_min=1e-11),
        "a_string_1": ScheduleParams(eps_max=1e-3, eps_min=1e-7),
        "a_string_2": ScheduleParams(eps_max=1e-3, eps_min=1e-7),
        "alpha_orbit_2": ScheduleParams(eps_max=1e-3, eps_min=1e-7),
        "cantor": ScheduleParams(eps_max=1e-1, eps_min=1e-7),
        "a_string_tower": ScheduleParams(eps_max=1e-3, eps_min=1e-6),
    }
    return ExperimentConfig(sets=sets, set_schedules=set_schedules)
