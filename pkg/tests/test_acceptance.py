"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they execute.
"""

import math
import time

import numpy as np
import pytest

import risrelay.cli as cli
from risrelay import (
    LinkBudget,
    LinkGeometry,
    RelayConfig,
    RelayProtocol,
    RisProfile,
    classify_regimes,
    cylindrical_power_gain,
    figure_spec,
    find_crossover,
    fit_scaling_exponent,
    meta_atom_count,
    relay_rate,
    ris_field_diffuser,
    ris_field_exact,
    ris_field_mirror,
    run_sweep,
)
from risrelay.regimes import median_smooth
from risrelay.sweep import IDEAL_FD_DF, RIS_EXACT, RIS_LENS
from risrelay.wavefield import PhaseProfile

from conftest import THETA_I, THETA_R


def report(number, description, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"CRITERION {number:>2}: {status} - {description}{suffix}")
    return ok


def exact_gain(budget, d0, ris):
    geometry = LinkGeometry.equidistant(d0, THETA_I, THETA_R)
    return ris_field_exact(budget, geometry, ris).amplitude_sq


def test_criterion_01_distance_crossover(budget28):
    start = time.monotonic()
    result = run_sweep(figure_spec("fig3"))
    cross = find_crossover(result.curve(RIS_EXACT), result.curve(IDEAL_FD_DF))
    elapsed = time.monotonic() - start
    value = cross.crossover_value
    ok = value is not None and 100.0 <= value <= 200.0 and elapsed < 60.0
    report(1, "exact-surface rate crosses below ideal FD relay at 100-200 m",
           ok, f"crossover {value:.1f} m, runtime {elapsed:.1f} s")
    assert ok


def test_criterion_02_regime_boundaries(budget28, ris075, fig3_result):
    geometry = LinkGeometry.equidistant(10.0, THETA_I, THETA_R)
    rep = classify_regimes(budget28, geometry, ris075, fig3_result.grid(), tolerance_db=1.0)
    ok_mirror = rep.mirror_boundary is not None and 20.0 <= rep.mirror_boundary <= 60.0
    ok_diffuser = rep.diffuser_boundary is not None and 60.0 <= rep.diffuser_boundary <= 120.0
    report(2, "mirror boundary in [20, 60] m and diffuser boundary in [60, 120] m",
           ok_mirror and ok_diffuser,
           f"mirror {rep.mirror_boundary:.1f} m, diffuser {rep.diffuser_boundary:.1f} m")
    assert ok_mirror and ok_diffuser


def test_criterion_03_frequency_behaviour(fig4_outdoor_result, fig4_indoor_result):
    cross = find_crossover(fig4_outdoor_result.curve(RIS_EXACT),
                           fig4_outdoor_result.curve(IDEAL_FD_DF))
    value = cross.crossover_value
    ok_outdoor = value is not None and 10e9 <= value <= 30e9

    ris_rates = fig4_indoor_result.rates(RIS_EXACT)
    relay_rates = fig4_indoor_result.rates(IDEAL_FD_DF)
    fraction = float(np.mean(ris_rates >= relay_rates))
    ok_indoor = fraction >= 0.95

    detail = (f"outdoor crossover {value / 1e9:.2f} GHz; "
              f"indoor fraction {fraction:.2f}")
    report(3, "outdoor crossover in [10, 30] GHz; indoor surface >= relay at 95% of grid",
           ok_outdoor and ok_indoor, detail)
    assert ok_outdoor, detail
    # Known model limitation, documented in the project decision notes: in the
    # reconstructed field model the mirror-regime surface rate sits ~0.26 dB
    # below the ideal FD relay (projected-aperture factor cos(ti)cos(tr) =
    # 0.354 vs the 0.375 break-even), and the exact curve oscillates about
    # that level, so the indoor >= comparison holds at roughly half the grid
    # points rather than 95%.  No field model consistent with criteria 1 and
    # 4 can satisfy this bound simultaneously.
    assert ok_indoor, (
        f"indoor fraction {fraction:.2f} < 0.95: unattainable jointly with "
        "criteria 1/3-outdoor/4 under a single consistent reflection model"
    )


def test_criterion_04_smallest_sufficient_half_length(fig5_outdoor_result):
    relay = fig5_outdoor_result.rates(IDEAL_FD_DF)
    surface = fig5_outdoor_result.rates(RIS_EXACT)
    grid = fig5_outdoor_result.grid()
    reaching = np.flatnonzero(surface >= relay - 0.1)
    ok = reaching.size > 0 and 0.4 <= grid[reaching[0]] <= 0.9
    detail = f"smallest half-length {grid[reaching[0]]:.3f} m" if reaching.size else "never reached"
    report(4, "smallest half-length reaching ideal-FD rate within 0.1 bit/s/Hz in [0.4, 0.9] m",
           ok, detail)
    assert ok


def test_criterion_05_asymptote_equivalence(budget28, ris075):
    near = np.logspace(math.log10(2.0), math.log10(20.0), 40)
    deltas_near = []
    for d0 in near:
        geometry = LinkGeometry.equidistant(d0, THETA_I, THETA_R)
        exact = ris_field_exact(budget28, geometry, ris075).amplitude_sq
        mirror = ris_field_mirror(budget28, geometry).amplitude_sq
        deltas_near.append(abs(10 * math.log10(exact / mirror)))
    mean_near = float(np.mean(deltas_near))

    far = np.logspace(math.log10(500.0), math.log10(5000.0), 24)
    deltas_far = []
    for d0 in far:
        geometry = LinkGeometry.equidistant(d0, THETA_I, THETA_R)
        exact = ris_field_exact(budget28, geometry, ris075).amplitude_sq
        diffuser = ris_field_diffuser(budget28, geometry, ris075).amplitude_sq
        deltas_far.append(abs(10 * math.log10(exact / diffuser)))
    max_far = float(np.max(deltas_far))

    ok = mean_near <= 1.0 and max_far <= 0.2
    report(5, "exact vs mirror within 1 dB mean on [2, 20] m; vs diffuser within 0.2 dB on [0.5, 5] km",
           ok, f"mirror mean {mean_near:.3f} dB, diffuser max {max_far:.4f} dB")
    assert ok


def test_criterion_06_scaling_exponents(budget28, ris075):
    # 80 points per decade: dense enough that the median smoothing no longer
    # biases the fit (the smoothed slope is grid-converged from ~60 points)
    near = np.logspace(math.log10(2.0), math.log10(20.0), 80)
    gains_near = median_smooth([exact_gain(budget28, d0, ris075) for d0 in near])
    slope_near = fit_scaling_exponent(list(zip(near, gains_near)))

    far = np.logspace(math.log10(500.0), math.log10(5000.0), 24)
    gains_far = [exact_gain(budget28, d0, ris075) for d0 in far]
    slope_far = fit_scaling_exponent(list(zip(far, gains_far)))

    relay_gains = [cylindrical_power_gain(budget28, d0).amplitude_sq for d0 in far]
    slope_relay = fit_scaling_exponent(list(zip(far, relay_gains)))

    ok = (abs(slope_near + 1.0) <= 0.05 and abs(slope_far + 2.0) <= 0.05
          and abs(slope_relay + 1.0) <= 1e-9)
    report(6, "fitted SNR slopes: -1 (mirror window), -2 (diffuser window), relay exactly -1",
           ok, f"near {slope_near:.3f}, far {slope_far:.3f}, relay {slope_relay:.12f}")
    assert ok


def test_criterion_07_quadratic_size_law(budget28):
    base = exact_gain(budget28, 5000.0, RisProfile(0.75))
    doubled = exact_gain(budget28, 5000.0, RisProfile(1.5))
    ratio = doubled / base
    ok = abs(ratio - 4.0) <= 0.2
    report(7, "doubling the half-length quadruples the deep-diffuser SNR (+-5%)",
           ok, f"ratio {ratio:.4f}")
    assert ok


def test_criterion_08_property_suite(budget28, fig3_result):
    failures = []

    # lens dominance over 200 randomized geometries
    rng = np.random.default_rng(20260809)
    for _ in range(200):
        d_sr, d_rd = rng.uniform(2.0, 500.0, 2)
        ti, tr = rng.uniform(-1.2, 1.2, 2)
        half = rng.uniform(0.05, 1.5)
        geometry = LinkGeometry(d_sr, d_rd, ti, tr)
        grad = ris_field_exact(budget28, geometry, RisProfile(half)).amplitude_sq
        lens = ris_field_exact(budget28, geometry,
                               RisProfile(half, PhaseProfile.FOCUSING_LENS)).amplitude_sq
        if not grad <= lens * (1.0 + 1e-9):
            failures.append(f"lens dominance violated at {geometry}")
            break

    # lens column dominates the gradient column across the whole distance grid
    if not np.all(fig3_result.rates(RIS_LENS) >= fig3_result.rates(RIS_EXACT) - 1e-12):
        failures.append("lens rate fell below exact rate on the distance grid")

    # reciprocity
    for _ in range(25):
        d_sr, d_rd = rng.uniform(2.0, 300.0, 2)
        ti, tr = rng.uniform(-1.2, 1.2, 2)
        fwd = ris_field_exact(budget28, LinkGeometry(d_sr, d_rd, ti, tr), RisProfile(0.75))
        rev = ris_field_exact(budget28, LinkGeometry(d_rd, d_sr, tr, ti), RisProfile(0.75))
        if abs(rev.amplitude_sq - fwd.amplitude_sq) > 1e-9 * fwd.amplitude_sq:
            failures.append("reciprocity violated")
            break

    # convergence certificates
    for d0 in (2.0, 10.0, 50.0, 200.0, 1000.0):
        sample = ris_field_exact(budget28, LinkGeometry.equidistant(d0, THETA_I, THETA_R),
                                 RisProfile(0.75))
        cert = sample.quadrature
        lo = min(cert.previous_amplitude_sq, sample.amplitude_sq)
        hi = max(cert.previous_amplitude_sq, sample.amplitude_sq)
        if not (cert.relative_delta < 1e-6 and lo <= sample.amplitude_sq <= hi):
            failures.append(f"convergence certificate failed at d0={d0}")

    # meta-atom counts
    if meta_atom_count(RisProfile(0.75, element_spacing_divisor=5.0), budget28) != 700:
        failures.append("meta-atom count for lambda/5 spacing != 700")
    if meta_atom_count(RisProfile(0.75, element_spacing_divisor=2.0), budget28) != 280:
        failures.append("meta-atom count for lambda/2 spacing != 280")

    # worked rate arithmetic
    hd = relay_rate(LinkBudget(28e9, 10 * math.log10(6.0)),
                    RelayConfig(RelayProtocol.HALF_DUPLEX_DF), 1.0, 1.0)
    if abs(hd.rate - 1.0) > 1e-9:
        failures.append(f"HD worked point rate {hd.rate!r} != 1")
    fd = relay_rate(LinkBudget(28e9, 10 * math.log10(2.0)),
                    RelayConfig(RelayProtocol.FULL_DUPLEX_DF), 1.0 / 11.0, 1.0 / 11.0)
    if abs(fd.rate - 1.0) > 1e-9:
        failures.append(f"FD worked point rate {fd.rate!r} != 1")

    ok = not failures
    report(8, "property suite (dominance, reciprocity, certificates, counts, arithmetic)",
           ok, "; ".join(failures) if failures else "all held")
    assert ok, failures


def test_criterion_09_oscillation_signature(budget28, ris075):
    grid = np.arange(5.0, 20.0 + 1e-9, 0.05)
    snr_ref = budget28.reference_snr_linear
    exact_rates = []
    mirror_rates = []
    diffuser_rates = []
    for d0 in grid:
        geometry = LinkGeometry.equidistant(d0, THETA_I, THETA_R)
        exact_rates.append(math.log2(1 + snr_ref * ris_field_exact(budget28, geometry, ris075).amplitude_sq))
        mirror_rates.append(math.log2(1 + snr_ref * ris_field_mirror(budget28, geometry).amplitude_sq))
        diffuser_rates.append(math.log2(1 + snr_ref * ris_field_diffuser(budget28, geometry, ris075).amplitude_sq))

    exact_rates = np.asarray(exact_rates)
    increments = np.diff(exact_rates)
    extrema = int(np.sum(increments[:-1] * increments[1:] < 0))
    mirror_monotone = bool(np.all(np.diff(mirror_rates) < 0))
    diffuser_monotone = bool(np.all(np.diff(diffuser_rates) < 0))

    ok = extrema >= 3 and mirror_monotone and diffuser_monotone
    report(9, "exact rate shows >= 3 extrema on [5, 20] m while both asymptotes are monotone",
           ok, f"extrema {extrema}")
    assert ok


def test_criterion_10_figure_determinism(tmp_path, capsys):
    paths = [tmp_path / "run1.csv", tmp_path / "run2.csv"]
    for path in paths:
        assert cli.main(["figure", "fig3", "--output", str(path)]) == 0
    capsys.readouterr()
    sections = [
        [line for line in p.read_text().splitlines() if not line.startswith("#")]
        for p in paths
    ]
    ok = sections[0] == sections[1]
    report(10, "repeated fig3 runs produce byte-identical CSV data sections", ok,
           f"{len(sections[0])} data lines")
    assert ok
