"""Command-line front end: canned figure sweeps and single-point evaluation.

Exit codes: 0 on success, 2 for usage or parameter-validation errors, 3 for
numerical failures (non-converged quadrature / aborted sweep).

Parameter precedence: command-line flags override the JSON config file
(``--config``), which overrides the built-in defaults.  The default output
directory can be set with the RISRELAY_OUTPUT_DIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .linkrate import RelayConfig, RelayProtocol, relay_rate, ris_rate
from .regimes import classify_regimes, find_crossover
from .sweep import (
    ALL_SCHEMES,
    FIGURE_NAMES,
    IDEAL_FD_DF,
    RIS_EXACT,
    ExperimentSpec,
    SweepError,
    SweepKind,
    figure_spec,
    meta_atom_count,
    run_sweep,
)
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

USAGE_ERROR = 2
NUMERICAL_ERROR = 3

# built-in defaults, shared by --help text, config merge and eval
DEFAULTS = {
    "frequency_ghz": 28.0,
    "ris_length_m": 1.5,  # full strip length 2L
    "distance_m": 10.0,
    "theta_i_deg": 45.0,
    "theta_r_deg": 60.0,
    "ref_snr_db": 114.0,
    "relay_power_fraction": 0.5,
    "self_interference_coeff": 10.0,
    "schemes": ",".join(ALL_SCHEMES),
    "grid_points": 200,
    "format": None,  # eval: human-readable table unless csv/records requested
    "output": None,
}

_AXIS_UNIT = {
    SweepKind.DISTANCE: ("distance", "m", 1.0),
    SweepKind.FREQUENCY: ("frequency", "GHz", 1e-9),
    SweepKind.RIS_SIZE: ("half-length", "m", 1.0),
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    add = parser.add_argument
    add("--frequency-ghz", type=float, help="carrier frequency in GHz (default: 28)")
    add("--ris-length-m", type=float,
        help="full strip length 2L in meters (default: 1.5)")
    add("--distance-m", type=float, help="hop distance d0 in meters (default: 10)")
    add("--theta-i-deg", type=float,
        help="transmitter angle from the surface normal in degrees (default: 45)")
    add("--theta-r-deg", type=float,
        help="receiver angle from the surface normal in degrees (default: 60)")
    add("--ref-snr-db", type=float,
        help="reference SNR at 1 m in dB (default: 114)")
    add("--relay-power-fraction", type=float,
        help="relay share of the total power (default: 0.5)")
    add("--self-interference-coeff", type=float,
        help="full-duplex self-interference coefficient (default: 10)")
    add("--schemes", type=str,
        help=f"comma-separated scheme subset (default: {','.join(ALL_SCHEMES)})")
    add("--grid-points", type=int, help="points per sweep grid (default: 200)")
    add("--output", type=str, help="output path (default: $RISRELAY_OUTPUT_DIR or cwd)")
    add("--format", choices=("csv", "records"),
        help="structured output: csv or records (JSON lines); eval prints a "
             "readable table when omitted")
    add("--config", type=str, help="JSON config file mirroring these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risrelay",
        description="Compare reflecting-surface and decode-and-forward relay link rates.",
    )
    parser.add_argument("--version", action="version", version=f"risrelay {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="run a canned sweep and write CSV + manifest")
    fig.add_argument("name", choices=FIGURE_NAMES)
    _add_common_flags(fig)

    ev = sub.add_parser("eval", help="evaluate all schemes at a single operating point")
    _add_common_flags(ev)

    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    unknown = [k for k in data if k not in DEFAULTS]
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")
    return data


def _merge_params(args: argparse.Namespace) -> dict:
    params = dict(DEFAULTS)
    params.update(_load_config(getattr(args, "config", None)))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def _parse_schemes(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        names = tuple(value)
    else:
        names = tuple(s.strip() for s in str(value).split(",") if s.strip())
    unknown = [s for s in names if s not in ALL_SCHEMES]
    if unknown:
        raise ValueError(f"unknown schemes: {unknown} (choose from {list(ALL_SCHEMES)})")
    return names


def _output_path(params: dict, default_name: str) -> str:
    if params.get("output"):
        return params["output"]
    base = os.environ.get("RISRELAY_OUTPUT_DIR", ".")
    return os.path.join(base, default_name)


def _spec_overrides(params: dict) -> dict:
    return {
        "carrier_frequency_hz": params["frequency_ghz"] * 1e9,
        "full_length_m": params["ris_length_m"],
        "d0_m": params["distance_m"],
        "theta_i_rad": math.radians(params["theta_i_deg"]),
        "theta_r_rad": math.radians(params["theta_r_deg"]),
        "reference_snr_db": params["ref_snr_db"],
        "relay_power_fraction": params["relay_power_fraction"],
        "self_interference_coefficient": params["self_interference_coeff"],
        "schemes": _parse_schemes(params["schemes"]),
    }


_SWEPT_FLAG = {
    SweepKind.DISTANCE: ("distance_m", "d0_m"),
    SweepKind.FREQUENCY: ("frequency_ghz", "carrier_frequency_hz"),
    SweepKind.RIS_SIZE: ("ris_length_m", "full_length_m"),
}


def cmd_figure(args: argparse.Namespace) -> int:
    params = _merge_params(args)
    base = figure_spec(args.name, grid_points=int(params["grid_points"]))
    overrides = _spec_overrides(params)

    flag, spec_field = _SWEPT_FLAG[base.sweep_kind]
    if getattr(args, flag, None) is not None:
        raise ValueError(f"--{flag.replace('_', '-')} conflicts with the swept axis of {args.name}")
    overrides.pop(spec_field)

    spec = ExperimentSpec(base.sweep_kind, base.grid,
                          **{**_spec_defaults(base), **overrides})
    result = run_sweep(spec)

    records = params["format"] == "records"
    suffix = "records" if records else "csv"
    out = _output_path(params, f"{args.name}.{suffix}")
    if records:
        with open(out, "w", encoding="utf-8") as handle:
            for row in result.rows:
                record = {"swept_value": row.swept_value, **row.rates}
                handle.write(json.dumps(record) + "\n")
    else:
        result.write_csv(out)
    result.write_manifest(out + ".manifest.json")
    print(f"wrote {out} ({len(result.rows)} rows) and {out}.manifest.json")

    _print_crossover_summary(result)
    if spec.sweep_kind is SweepKind.DISTANCE:
        _print_regime_summary(spec, result)
    return 0


def _spec_defaults(spec: ExperimentSpec) -> dict:
    return {
        "carrier_frequency_hz": spec.carrier_frequency_hz,
        "full_length_m": spec.full_length_m,
        "d0_m": spec.d0_m,
        "theta_i_rad": spec.theta_i_rad,
        "theta_r_rad": spec.theta_r_rad,
        "reference_snr_db": spec.reference_snr_db,
        "relay_power_fraction": spec.relay_power_fraction,
        "self_interference_coefficient": spec.self_interference_coefficient,
        "schemes": spec.schemes,
    }


def _print_crossover_summary(result) -> None:
    schemes = result.spec.schemes
    if RIS_EXACT not in schemes or IDEAL_FD_DF not in schemes:
        print("crossover: n/a (needs both RIS-anomalous-exact and IdealFD-DF)")
        return
    cross = find_crossover(result.curve(RIS_EXACT), result.curve(IDEAL_FD_DF))
    axis, unit, scale = _AXIS_UNIT[result.spec.sweep_kind]
    if cross.crossover_value is None:
        who = cross.dominator or "neither scheme"
        print(f"crossover: none over the {axis} grid; {who} dominates throughout")
    else:
        print(
            f"crossover at {cross.crossover_value * scale:.4g} {unit} ({axis} axis): "
            f"{cross.scheme_a} dominates below, {cross.scheme_b} above"
        )


def _print_regime_summary(spec: ExperimentSpec, result) -> None:
    budget = LinkBudget(spec.carrier_frequency_hz, spec.reference_snr_db)
    geometry = LinkGeometry.equidistant(spec.d0_m, spec.theta_i_rad, spec.theta_r_rad)
    ris = RisProfile(spec.full_length_m / 2.0,
                     element_spacing_divisor=spec.element_spacing_divisor)
    try:
        report = classify_regimes(budget, geometry, ris, result.grid())
    except ValueError as exc:
        print(f"regimes: n/a ({exc})")
        return
    mirror = "none" if report.mirror_boundary is None else f"{report.mirror_boundary:.1f} m"
    diffuser = "none" if report.diffuser_boundary is None else f"{report.diffuser_boundary:.1f} m"
    print(f"regimes ({report.tolerance_db:g} dB tolerance): mirror-like up to {mirror}, "
          f"diffuser-like beyond {diffuser}")


def cmd_eval(args: argparse.Namespace) -> int:
    params = _merge_params(args)
    budget = LinkBudget(params["frequency_ghz"] * 1e9, params["ref_snr_db"])
    geometry = LinkGeometry.equidistant(
        params["distance_m"],
        math.radians(params["theta_i_deg"]),
        math.radians(params["theta_r_deg"]),
    )
    ris = RisProfile(params["ris_length_m"] / 2.0)
    schemes = _parse_schemes(params["schemes"])

    rows = []
    exact_sample = None
    for scheme in schemes:
        if scheme in (RelayProtocol.HALF_DUPLEX_DF.value,
                      RelayProtocol.FULL_DUPLEX_DF.value,
                      RelayProtocol.IDEAL_FULL_DUPLEX_DF.value):
            config = RelayConfig(RelayProtocol(scheme), params["relay_power_fraction"],
                                 params["self_interference_coeff"])
            res = relay_rate(budget, config, geometry.d_sr, geometry.d_rd)
        elif scheme == RIS_EXACT:
            exact_sample = ris_field_exact(budget, geometry, ris)
            res = ris_rate(budget, exact_sample)
        elif scheme == "RIS-mirror-asymptote":
            res = ris_rate(budget, ris_field_mirror(budget, geometry))
        elif scheme == "RIS-diffuser-asymptote":
            res = ris_rate(budget, ris_field_diffuser(budget, geometry, ris))
        else:  # RIS-lens
            lens = RisProfile(ris.half_length, PhaseProfile.FOCUSING_LENS,
                              ris.element_spacing_divisor)
            res = ris_rate(budget, ris_field_exact(budget, geometry, lens))
        snr_db = -math.inf if res.snr_linear == 0 else 10.0 * math.log10(res.snr_linear)
        rows.append({"scheme": scheme, "snr_db": snr_db, "rate_bit_s_hz": res.rate})

    if params["format"] == "records":
        for row in rows:
            print(json.dumps(row, sort_keys=False))
        return 0
    if params["format"] == "csv":
        print("scheme,snr_db,rate_bit_s_hz")
        for row in rows:
            print(f"{row['scheme']},{row['snr_db']:.12e},{row['rate_bit_s_hz']:.12e}")
        return 0

    print(f"risrelay eval: f={params['frequency_ghz']:g} GHz, d0={params['distance_m']:g} m, "
          f"2L={params['ris_length_m']:g} m, "
          f"theta=({params['theta_i_deg']:g},{params['theta_r_deg']:g}) deg, "
          f"P/N0={params['ref_snr_db']:g} dB")
    print(f"meta-atoms (lambda/{ris.element_spacing_divisor:g} spacing): "
          f"{meta_atom_count(ris, budget)}")
    print(f"{'scheme':26s} {'SNR [dB]':>12s} {'rate [bit/s/Hz]':>16s}")
    for row in rows:
        print(f"{row['scheme']:26s} {row['snr_db']:12.3f} {row['rate_bit_s_hz']:16.4f}")

    if exact_sample is not None:
        _print_zone_note(budget, geometry, ris, exact_sample)
    return 0


def _print_zone_note(budget, geometry, ris, exact_sample) -> None:
    mirror = ris_field_mirror(budget, geometry).amplitude_sq
    diffuser = ris_field_diffuser(budget, geometry, ris).amplitude_sq
    dm = 10.0 * math.log10(exact_sample.amplitude_sq / mirror)
    dd = 10.0 * math.log10(exact_sample.amplitude_sq / diffuser)
    if abs(dm) <= 1.0:
        zone = "mirror-like zone"
    elif abs(dd) <= 1.0:
        zone = "diffuser-like zone"
    else:
        zone = "transition zone"
    print(f"exact field vs asymptotes: mirror {dm:+.2f} dB, diffuser {dd:+.2f} dB ({zone})")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            return cmd_figure(args)
        return cmd_eval(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (QuadratureError, SweepError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
