"""Experiment harness: evaluate every scheme over a parameter grid.

A sweep fixes one experiment axis (hop distance, carrier frequency, or strip
half-length), evaluates all requested schemes at every grid point with the
surface placed midway between transmitter and receiver, and serialises the
result as CSV plus a JSON run manifest.  Grid cells are independent; the
harness can evaluate them in parallel and always assembles rows in grid
order, so output is identical regardless of worker count.
"""

from __future__ import annotations

import dataclasses
import datetime
import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linkrate import RelayConfig, RelayProtocol, relay_rate, ris_rate
from .regimes import RateCurve
from .wavefield import (
    LinkBudget,
    LinkGeometry,
    PhaseProfile,
    QuadratureError,
    RisProfile,
    ris_field_diffuser,
    ris_field_exact,
    ris_field_mirror,
)

HD_DF = "HD-DF"
FD_DF = "FD-DF"
IDEAL_FD_DF = "IdealFD-DF"
RIS_EXACT = "RIS-anomalous-exact"
RIS_MIRROR = "RIS-mirror-asymptote"
RIS_DIFFUSER = "RIS-diffuser-asymptote"
RIS_LENS = "RIS-lens"

ALL_SCHEMES = (HD_DF, FD_DF, IDEAL_FD_DF, RIS_EXACT, RIS_MIRROR, RIS_DIFFUSER, RIS_LENS)

_RELAY_PROTOCOLS = {
    HD_DF: RelayProtocol.HALF_DUPLEX_DF,
    FD_DF: RelayProtocol.FULL_DUPLEX_DF,
    IDEAL_FD_DF: RelayProtocol.IDEAL_FULL_DUPLEX_DF,
}

DEFAULT_GRID_POINTS = 200


class SweepKind(enum.Enum):
    DISTANCE = "Distance"
    FREQUENCY = "Frequency"
    RIS_SIZE = "RisSize"


_AXIS_LABEL = {
    SweepKind.DISTANCE: "hop distance d0 [m]",
    SweepKind.FREQUENCY: "carrier frequency [Hz]",
    SweepKind.RIS_SIZE: "strip half-length L [m]",
}


class SweepError(RuntimeError):
    """A grid cell failed; carries the cell and the completed partial rows."""

    def __init__(self, swept_value: float, scheme: str, cause: Exception, partial):
        self.swept_value = swept_value
        self.scheme = scheme
        self.cause = cause
        self.partial = tuple(partial)
        super().__init__(
            f"sweep aborted at swept value {swept_value!r}, scheme {scheme!r}: {cause} "
            f"({len(self.partial)} rows completed)"
        )


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: the swept axis, its grid, and the fixed link parameters.

    For a RIS_SIZE sweep the grid holds strip half-lengths L;
    ``full_length_m`` is the full strip length 2L used by the other kinds.
    """

    sweep_kind: SweepKind
    grid: tuple[float, ...]
    schemes: tuple[str, ...] = ALL_SCHEMES
    carrier_frequency_hz: float = 28e9
    full_length_m: float = 1.5
    d0_m: float = 10.0
    theta_i_rad: float = math.radians(45.0)
    theta_r_rad: float = math.radians(60.0)
    reference_snr_db: float = 114.0
    relay_power_fraction: float = 0.5
    self_interference_coefficient: float = 10.0
    element_spacing_divisor: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if len(self.grid) < 2:
            raise ValueError("grid needs at least 2 points")
        if self.grid[0] <= 0 or any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing and positive")
        unknown = [s for s in self.schemes if s not in ALL_SCHEMES]
        if unknown:
            raise ValueError(f"unknown schemes: {unknown}")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        # fixed parameters are validated by the domain types they feed
        LinkBudget(self.carrier_frequency_hz, self.reference_snr_db)
        LinkGeometry.equidistant(self.d0_m, self.theta_i_rad, self.theta_r_rad)
        RisProfile(self.full_length_m / 2.0,
                   element_spacing_divisor=self.element_spacing_divisor)
        RelayConfig(RelayProtocol.HALF_DUPLEX_DF, self.relay_power_fraction,
                    self.self_interference_coefficient)


@dataclass(frozen=True)
class SweepRow:
    swept_value: float
    rates: dict[str, float]
    quadrature_samples: int = 0


@dataclass(frozen=True)
class SweepResult:
    spec: ExperimentSpec
    rows: tuple[SweepRow, ...]
    metadata: dict = field(default_factory=dict)

    def rates(self, scheme: str) -> np.ndarray:
        return np.array([row.rates[scheme] for row in self.rows])

    def grid(self) -> np.ndarray:
        return np.array([row.swept_value for row in self.rows])

    def curve(self, scheme: str) -> RateCurve:
        return RateCurve(scheme=scheme, grid=self.grid(), rates=self.rates(scheme))

    def to_csv(self) -> str:
        lines = [f"# risrelay v{_version()} sweep"]
        lines.append(f"# sweep_kind: {self.spec.sweep_kind.value}")
        lines.append(f"# swept_axis: {_AXIS_LABEL[self.spec.sweep_kind]}")
        for key, value in _spec_echo(self.spec):
            lines.append(f"# {key}: {value}")
        for key in ("quadrature_rel_tol", "quadrature_max_cell_samples",
                    "quadrature_total_samples"):
            if key in self.metadata:
                lines.append(f"# {key}: {self.metadata[key]}")
        lines.append(f"# timestamp: {self.metadata.get('timestamp', '')}")
        lines.append(",".join(["swept_variable", *self.spec.schemes]))
        for row in self.rows:
            cells = [f"{row.swept_value:.12e}"]
            cells += [f"{row.rates[s]:.12e}" for s in self.spec.schemes]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_csv())

    def manifest(self) -> dict:
        return {
            "tool": "risrelay",
            "version": _version(),
            "sweep_kind": self.spec.sweep_kind.value,
            "swept_axis": _AXIS_LABEL[self.spec.sweep_kind],
            "grid": {
                "points": len(self.spec.grid),
                "min": self.spec.grid[0],
                "max": self.spec.grid[-1],
            },
            "schemes": list(self.spec.schemes),
            "fixed_parameters": dict(_spec_echo(self.spec)),
            "quadrature": {
                "rel_tol": self.metadata.get("quadrature_rel_tol"),
                "max_cell_samples": self.metadata.get("quadrature_max_cell_samples"),
                "total_samples": self.metadata.get("quadrature_total_samples"),
            },
            "timestamp": self.metadata.get("timestamp"),
        }

    def write_manifest(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.manifest(), handle, indent=2, sort_keys=False)
            handle.write("\n")


def _version() -> str:
    from . import __version__

    return __version__


def _spec_echo(spec: ExperimentSpec):
    """Fixed-parameter echo lines; the swept parameter is marked as such."""
    items = [
        ("carrier_frequency_hz", spec.carrier_frequency_hz, SweepKind.FREQUENCY),
        ("full_length_m", spec.full_length_m, SweepKind.RIS_SIZE),
        ("d0_m", spec.d0_m, SweepKind.DISTANCE),
        ("theta_i_deg", math.degrees(spec.theta_i_rad), None),
        ("theta_r_deg", math.degrees(spec.theta_r_rad), None),
        ("reference_snr_db", spec.reference_snr_db, None),
        ("relay_power_fraction", spec.relay_power_fraction, None),
        ("self_interference_coefficient", spec.self_interference_coefficient, None),
        ("element_spacing_divisor", spec.element_spacing_divisor, None),
    ]
    echo = []
    for key, value, swept_by in items:
        if swept_by is spec.sweep_kind:
            echo.append((key, "swept"))
        else:
            echo.append((key, f"{float(value):.12g}"))
    return echo


def _cell_inputs(spec: ExperimentSpec, value: float):
    frequency = spec.carrier_frequency_hz
    d0 = spec.d0_m
    half_length = spec.full_length_m / 2.0
    if spec.sweep_kind is SweepKind.DISTANCE:
        d0 = value
    elif spec.sweep_kind is SweepKind.FREQUENCY:
        frequency = value
    elif spec.sweep_kind is SweepKind.RIS_SIZE:
        half_length = value
    budget = LinkBudget(frequency, spec.reference_snr_db)
    geometry = LinkGeometry.equidistant(d0, spec.theta_i_rad, spec.theta_r_rad)
    ris = RisProfile(half_length, PhaseProfile.ANOMALOUS_GRADIENT,
                     spec.element_spacing_divisor)
    return budget, geometry, ris


def _evaluate_cell(spec: ExperimentSpec, value: float) -> SweepRow:
    budget, geometry, ris = _cell_inputs(spec, value)
    rates: dict[str, float] = {}
    samples = 0
    exact_sample = None
    for scheme in spec.schemes:
        if scheme in _RELAY_PROTOCOLS:
            config = RelayConfig(_RELAY_PROTOCOLS[scheme], spec.relay_power_fraction,
                                 spec.self_interference_coefficient)
            rates[scheme] = relay_rate(budget, config, geometry.d_sr, geometry.d_rd).rate
        elif scheme == RIS_EXACT:
            exact_sample = ris_field_exact(budget, geometry, ris)
            samples = max(samples, exact_sample.quadrature.samples)
            rates[scheme] = ris_rate(budget, exact_sample).rate
        elif scheme == RIS_MIRROR:
            rates[scheme] = ris_rate(budget, ris_field_mirror(budget, geometry)).rate
        elif scheme == RIS_DIFFUSER:
            rates[scheme] = ris_rate(budget, ris_field_diffuser(budget, geometry, ris)).rate
        elif scheme == RIS_LENS:
            lens = dataclasses.replace(ris, phase_kind=PhaseProfile.FOCUSING_LENS)
            lens_sample = ris_field_exact(budget, geometry, lens)
            samples = max(samples, lens_sample.quadrature.samples)
            rates[scheme] = ris_rate(budget, lens_sample).rate
    return SweepRow(swept_value=value, rates=rates, quadrature_samples=samples)


def run_sweep(spec: ExperimentSpec, workers: int = 1) -> SweepResult:
    """Evaluate the sweep; deterministic and order-preserving.

    Numerical failures in a cell abort the sweep with a :class:`SweepError`
    that records the offending cell and the rows completed before it (in
    grid order).
    """
    outcomes: list = [None] * len(spec.grid)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_cell, spec, v) for v in spec.grid]
            for i, fut in enumerate(futures):
                try:
                    outcomes[i] = ("ok", fut.result())
                except QuadratureError as exc:
                    outcomes[i] = ("err", exc)
    else:
        for i, value in enumerate(spec.grid):
            try:
                outcomes[i] = ("ok", _evaluate_cell(spec, value))
            except QuadratureError as exc:
                outcomes[i] = ("err", exc)

    rows: list[SweepRow] = []
    for i, (status, payload) in enumerate(outcomes):
        if status == "err":
            raise SweepError(spec.grid[i], RIS_EXACT, payload, rows)
        rows.append(payload)

    from .wavefield import QUADRATURE_MAX_SAMPLES, QUADRATURE_REL_TOL

    metadata = {
        "quadrature_rel_tol": QUADRATURE_REL_TOL,
        "quadrature_max_cell_samples": max((r.quadrature_samples for r in rows), default=0),
        "quadrature_total_samples": sum(r.quadrature_samples for r in rows),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return SweepResult(spec=spec, rows=tuple(rows), metadata=metadata)


def meta_atom_count(ris: RisProfile, budget: LinkBudget) -> int:
    """Number of surface elements: round(2 L D / lambda).

    The count should come out >= 1 for the spacing to make sense; callers
    sweeping exotic sizes are expected to check.
    """
    return int(round(2.0 * ris.half_length * ris.element_spacing_divisor
                     / budget.wavelength_m))


def _log_grid(lo: float, hi: float, points: int) -> tuple[float, ...]:
    return tuple(np.logspace(math.log10(lo), math.log10(hi), points))


def figure_spec(name: str, grid_points: int = DEFAULT_GRID_POINTS) -> ExperimentSpec:
    """Canned experiment definitions for the standard comparison figures.

    fig3         rate vs hop distance, 1-1000 m, 28 GHz, 2L = 1.5 m
    fig4-indoor  rate vs carrier frequency, 6-100 GHz, d0 = 10 m
    fig4-outdoor rate vs carrier frequency, 6-100 GHz, d0 = 100 m
    fig5-indoor  rate vs strip half-length, 0.01-2 m, d0 = 10 m
    fig5-outdoor rate vs strip half-length, 0.01-2 m, d0 = 100 m
    """
    if name == "fig3":
        return ExperimentSpec(SweepKind.DISTANCE, _log_grid(1.0, 1000.0, grid_points))
    if name in ("fig4-indoor", "fig4-outdoor"):
        d0 = 10.0 if name.endswith("indoor") else 100.0
        return ExperimentSpec(SweepKind.FREQUENCY, _log_grid(6e9, 100e9, grid_points),
                              d0_m=d0)
    if name in ("fig5-indoor", "fig5-outdoor"):
        d0 = 10.0 if name.endswith("indoor") else 100.0
        return ExperimentSpec(SweepKind.RIS_SIZE, _log_grid(0.01, 2.0, grid_points),
                              d0_m=d0)
    raise ValueError(f"unknown figure name: {name!r}")


FIGURE_NAMES = ("fig3", "fig4-indoor", "fig4-outdoor", "fig5-indoor", "fig5-outdoor")
