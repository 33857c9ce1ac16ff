"""Tube volumes, box dimensions and normalized Minkowski contents.

Construct bounded subsets of Euclidean space, evaluate their
epsilon-neighborhood volumes exactly or numerically, estimate box
dimensions and normalized Minkowski contents over epsilon schedules,
and check that the normalized content of a measurable set does not
change when the set is embedded one ambient dimension up.
"""

from .ballvol import GammaRatio, gamma_ball, gamma_fn, gamma_ratio, power_law_lift_integral
from .cloud import PointCloud, grid_tube, grid_tube_measure, mc_tube, mc_tube_measure
from .config import ExperimentConfig, default_config, dump_config, load_config
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    DomainError,
    MinktubeError,
    ResolutionError,
    UnsupportedError,
)
from .estimate import (
    ContentEstimate,
    DimensionFit,
    EpsSchedule,
    box_dimension_fit,
    content_estimate,
    measurability_verdict,
)
from .intervals import (
    IntervalUnion,
    a_string,
    alpha_orbit,
    cantor_cover,
    make_intervals,
    make_points,
    tube_measure_1d,
)
from .invariance import (
    coarse_bounds_check,
    constants_grid,
    embedding_report,
    extremality_check,
    product_inequality_check,
    sandwich_check,
)
from .quadrature import QuadResult, integrate_adaptive
from .selftest import run_selftest
from .setspec import Realization, SetSpec, realize
from .tube import TubeFunction, exact_tube, lift_tube, product_with_unit_interval

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ContentEstimate",
    "ConvergenceError",
    "DataError",
    "DimensionFit",
    "DomainError",
    "EpsSchedule",
    "ExperimentConfig",
    "GammaRatio",
    "IntervalUnion",
    "MinktubeError",
    "PointCloud",
    "QuadResult",
    "Realization",
    "ResolutionError",
    "SetSpec",
    "TubeFunction",
    "UnsupportedError",
    "a_string",
    "alpha_orbit",
    "box_dimension_fit",
    "cantor_cover",
    "coarse_bounds_check",
    "constants_grid",
    "content_estimate",
    "default_config",
    "dump_config",
    "embedding_report",
    "exact_tube",
    "extremality_check",
    "gamma_ball",
    "gamma_fn",
    "gamma_ratio",
    "grid_tube",
    "grid_tube_measure",
    "integrate_adaptive",
    "lift_tube",
    "load_config",
    "make_intervals",
    "make_points",
    "mc_tube",
    "mc_tube_measure",
    "measurability_verdict",
    "power_law_lift_integral",
    "product_inequality_check",
    "product_with_unit_interval",
    "realize",
    "run_selftest",
    "sandwich_check",
    "tube_measure_1d",
]
