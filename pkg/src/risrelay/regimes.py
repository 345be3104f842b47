"""Regime classification, scaling-exponent fits and rate-curve crossovers.

The exact reflected field follows the mirror asymptote (power ~ 1/d) while
the strip is electrically large and the diffuser asymptote (power ~ 1/d^2)
once it is electrically small.  This module locates the two regime
boundaries on a distance grid, fits log-log scaling exponents, and finds the
dominance switch between two sampled rate curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavefield import (
    LinkBudget,
    LinkGeometry,
    RisProfile,
    ris_field_diffuser,
    ris_field_exact,
    ris_field_mirror,
)

DEFAULT_TOLERANCE_DB = 1.0
DEFAULT_SMOOTHING_WINDOW = 0.1  # log10 decades
# sign runs of the smoothed difference lighter than this fraction of the
# heaviest run are treated as oscillation ripple, not dominance switches
DEFAULT_RIPPLE_MASS_FRACTION = 0.05
_MEDIAN_WINDOW = 5


@dataclass(frozen=True, eq=False)
class RateCurve:
    """A scheme's rate sampled over a strictly increasing positive grid."""

    scheme: str
    grid: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        rates = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "rates", rates)
        if grid.ndim != 1 or grid.size != rates.size:
            raise ValueError("grid and rates must be 1-D arrays of equal length")
        if grid.size < 2 or not np.all(np.diff(grid) > 0) or grid[0] <= 0:
            raise ValueError("grid must be strictly increasing and positive")


@dataclass(frozen=True)
class RegimeReport:
    """Distance boundaries of the mirror-like and diffuser-like regimes.

    ``mirror_boundary`` is the largest distance (below the diffuser regime)
    at which the exact field still agrees with the mirror asymptote within
    ``tolerance_db``; ``diffuser_boundary`` the smallest distance beyond
    which it stays within tolerance of the diffuser asymptote.  A boundary is
    None when the exact curve never tracks that asymptote on the grid; the
    residual fields then tell how close it came.
    """

    mirror_boundary: float | None
    diffuser_boundary: float | None
    tolerance_db: float
    mirror_residual_db: float
    diffuser_residual_db: float

    def __post_init__(self):
        if self.mirror_boundary is not None and self.diffuser_boundary is not None:
            if self.mirror_boundary > self.diffuser_boundary:
                raise ValueError("mirror_boundary must not exceed diffuser_boundary")


@dataclass(frozen=True)
class CrossoverResult:
    """Dominance switch between two rate curves.

    When a crossover exists, ``scheme_a`` dominates below ``crossover_value``
    and ``scheme_b`` above it (on the smoothed curves).  Without one,
    ``crossover_value`` is None and ``dominator`` names the uniformly better
    scheme (None when the curves are indistinguishable).
    """

    crossover_value: float | None
    scheme_a: str
    scheme_b: str
    smoothing_window: float
    dominator: str | None = None


def fit_scaling_exponent(samples) -> float:
    """Least-squares slope of log(amplitude) versus log(distance).

    ``samples`` is an ordered sequence of (d0, amplitude_sq) pairs with
    strictly increasing positive d0; at least 8 points are required.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (d0, amplitude_sq) pairs")
    if arr.shape[0] < 8:
        raise ValueError("at least 8 samples are required")
    d, a = arr[:, 0], arr[:, 1]
    if d[0] <= 0 or not np.all(np.diff(d) > 0):
        raise ValueError("d0 values must be strictly increasing and positive")
    if np.any(a <= 0):
        raise ValueError("amplitudes must be positive")
    slope, _ = np.polyfit(np.log(d), np.log(a), 1)
    return float(slope)


def median_smooth(values, window: int = _MEDIAN_WINDOW) -> np.ndarray:
    """Running median with a centered window (shrunk at the edges)."""
    y = np.asarray(values, dtype=float)
    half = window // 2
    out = np.empty_like(y)
    for i in range(y.size):
        lo, hi = max(0, i - half), min(y.size, i + half + 1)
        out[i] = np.median(y[lo : hi])
    return out


def _interp_crossing(log_grid, deltas, i, tolerance):
    """Grid value where ``deltas`` crosses ``tolerance`` between i and i+1."""
    t = (tolerance - deltas[i]) / (deltas[i + 1] - deltas[i])
    return float(10.0 ** (log_grid[i] + t * (log_grid[i + 1] - log_grid[i])))


def classify_regimes(budget: LinkBudget, geometry: LinkGeometry, ris: RisProfile,
                     d0_grid, tolerance_db: float = DEFAULT_TOLERANCE_DB) -> RegimeReport:
    """Locate the mirror and diffuser boundaries on a distance grid.

    The angles of ``geometry`` are kept and the surface is placed midway
    (d_sr = d_rd = d0) at every grid point.  The grid must span at least
    [1, 1000] m with >= 50 points, strictly increasing.  Deviations from each
    asymptote are median-smoothed over a 5-point window before the
    ``tolerance_db`` crossings are interpolated.
    """
    grid = np.asarray(d0_grid, dtype=float)
    if grid.size < 50:
        raise ValueError("d0_grid needs at least 50 points")
    if not np.all(np.diff(grid) > 0) or grid[0] <= 0:
        raise ValueError("d0_grid must be strictly increasing and positive")
    if grid[0] > 1.0 or grid[-1] < 1000.0:
        raise ValueError("d0_grid must span at least [1, 1000] m")

    exact = np.empty(grid.size)
    mirror = np.empty(grid.size)
    diffuser = np.empty(grid.size)
    for i, d0 in enumerate(grid):
        geo = LinkGeometry.equidistant(d0, geometry.theta_i, geometry.theta_r)
        exact[i] = ris_field_exact(budget, geo, ris).amplitude_sq
        mirror[i] = ris_field_mirror(budget, geo).amplitude_sq
        diffuser[i] = ris_field_diffuser(budget, geo, ris).amplitude_sq

    delta_mirror = median_smooth(np.abs(10.0 * np.log10(exact / mirror)))
    delta_diffuser = median_smooth(np.abs(10.0 * np.log10(exact / diffuser)))
    log_grid = np.log10(grid)

    # diffuser regime: smallest d0 beyond which the deviation stays in tolerance
    above = np.flatnonzero(delta_diffuser > tolerance_db)
    if above.size == 0:
        diffuser_boundary = float(grid[0])
    elif above[-1] == grid.size - 1:
        diffuser_boundary = None
    else:
        diffuser_boundary = _interp_crossing(log_grid, delta_diffuser, above[-1], tolerance_db)

    # mirror regime: largest in-tolerance d0 before the diffuser regime begins
    cap = grid.size if diffuser_boundary is None else int(np.searchsorted(grid, diffuser_boundary))
    under = np.flatnonzero(delta_mirror[:cap] <= tolerance_db)
    if under.size == 0:
        mirror_boundary = None
    else:
        i = int(under[-1])
        if i + 1 < grid.size and delta_mirror[i + 1] > tolerance_db:
            mirror_boundary = _interp_crossing(log_grid, delta_mirror, i, tolerance_db)
        else:
            mirror_boundary = float(grid[i])

    return RegimeReport(
        mirror_boundary=mirror_boundary,
        diffuser_boundary=diffuser_boundary,
        tolerance_db=tolerance_db,
        mirror_residual_db=float(delta_mirror.min()),
        diffuser_residual_db=float(delta_diffuser.min()),
    )


def _log_moving_average(values: np.ndarray, log_x: np.ndarray, window: float) -> np.ndarray:
    out = np.empty_like(values)
    lo = 0
    hi = 0
    half = window / 2.0
    for i in range(values.size):
        while log_x[lo] < log_x[i] - half:
            lo += 1
        while hi < values.size and log_x[hi] <= log_x[i] + half:
            hi += 1
        out[i] = values[lo:hi].mean()
    return out


def _sign_runs(diff: np.ndarray, log_x: np.ndarray):
    """Maximal runs of constant nonzero sign with their integrated mass."""
    runs = []
    signs = np.sign(diff)
    i = 0
    while i < diff.size:
        if signs[i] == 0:
            i += 1
            continue
        j = i
        while j < diff.size and signs[j] == signs[i]:
            j += 1
        mass = float(np.trapezoid(np.abs(diff[i:j]), log_x[i:j])) if j - i > 1 else 0.0
        runs.append({"start": i, "stop": j, "sign": signs[i], "mass": mass})
        i = j
    return runs


def find_crossover(curve_a: RateCurve, curve_b: RateCurve,
                   smoothing_window: float = DEFAULT_SMOOTHING_WINDOW,
                   ripple_mass_fraction: float = DEFAULT_RIPPLE_MASS_FRACTION) -> CrossoverResult:
    """Find the final dominance switch between two sampled rate curves.

    Both curves are smoothed with a moving average over ``smoothing_window``
    log-decades.  Sign runs of the difference whose integrated magnitude is
    below ``ripple_mass_fraction`` of the heaviest run are discarded as
    oscillation ripple; the crossover is the largest remaining sign change,
    refined by bisection on the linearly interpolated smoothed difference.
    """
    if curve_a.grid.shape != curve_b.grid.shape or not np.array_equal(curve_a.grid, curve_b.grid):
        raise ValueError("curves must be sampled on the same grid")

    log_x = np.log10(curve_a.grid)
    smooth_a = _log_moving_average(curve_a.rates, log_x, smoothing_window)
    smooth_b = _log_moving_average(curve_b.rates, log_x, smoothing_window)
    diff = smooth_a - smooth_b

    runs = _sign_runs(diff, log_x)
    if not runs:
        return CrossoverResult(None, curve_a.scheme, curve_b.scheme,
                               smoothing_window, dominator=None)

    heaviest = max(r["mass"] for r in runs)
    kept = [r for r in runs if heaviest > 0 and r["mass"] >= ripple_mass_fraction * heaviest]
    merged: list[dict] = []
    for r in kept:
        if merged and merged[-1]["sign"] == r["sign"]:
            merged[-1]["stop"] = r["stop"]
            merged[-1]["mass"] += r["mass"]
        else:
            merged.append(dict(r))

    if len(merged) < 2:
        sign = merged[0]["sign"] if merged else runs[0]["sign"]
        dominator = curve_a.scheme if sign > 0 else curve_b.scheme
        return CrossoverResult(None, curve_a.scheme, curve_b.scheme,
                               smoothing_window, dominator=dominator)

    left, right = merged[-2], merged[-1]
    lo = log_x[left["stop"] - 1]
    hi = log_x[right["start"]]
    sign_lo = left["sign"]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if np.sign(np.interp(mid, log_x, diff)) == sign_lo:
            lo = mid
        else:
            hi = mid
    crossover = float(10.0 ** (0.5 * (lo + hi)))

    below = curve_a.scheme if sign_lo > 0 else curve_b.scheme
    above = curve_b.scheme if sign_lo > 0 else curve_a.scheme
    return CrossoverResult(crossover, below, above, smoothing_window)
