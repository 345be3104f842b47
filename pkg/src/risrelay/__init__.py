"""Rate comparison of reconfigurable reflecting surfaces and DF relays.

The package models a two-dimensional link in which a transmitter reaches a
receiver either through a decode-and-forward relay or through a finite
reflecting strip (a reconfigurable surface) placed at the origin.  Cylindrical
wave propagation, exact boundary-integral reflection fields, their mirror and
diffuser asymptotes, relay/surface link rates, regime classification, and a
sweep harness with a CLI front end are provided.
"""

from .wavefield import (
    SPEED_OF_LIGHT,
    FieldSample,
    LinkBudget,
    LinkGeometry,
    PhaseProfile,
    QuadratureError,
    QuadratureInfo,
    RisProfile,
    cylindrical_power_gain,
    gradient_phase,
    lens_phase,
    ris_field_diffuser,
    ris_field_exact,
    ris_field_mirror,
)
from .linkrate import RateResult, RelayConfig, RelayProtocol, relay_rate, ris_rate
from .regimes import (
    CrossoverResult,
    RateCurve,
    RegimeReport,
    classify_regimes,
    find_crossover,
    fit_scaling_exponent,
)
from .sweep import (
    ALL_SCHEMES,
    ExperimentSpec,
    SweepError,
    SweepKind,
    SweepResult,
    figure_spec,
    meta_atom_count,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "FieldSample",
    "LinkBudget",
    "LinkGeometry",
    "PhaseProfile",
    "QuadratureError",
    "QuadratureInfo",
    "RisProfile",
    "cylindrical_power_gain",
    "gradient_phase",
    "lens_phase",
    "ris_field_diffuser",
    "ris_field_exact",
    "ris_field_mirror",
    "RateResult",
    "RelayConfig",
    "RelayProtocol",
    "relay_rate",
    "ris_rate",
    "CrossoverResult",
    "RateCurve",
    "RegimeReport",
    "classify_regimes",
    "find_crossover",
    "fit_scaling_exponent",
    "ALL_SCHEMES",
    "ExperimentSpec",
    "SweepError",
    "SweepKind",
    "SweepResult",
    "figure_spec",
    "meta_atom_count",
    "run_sweep",
    "__version__",
]
