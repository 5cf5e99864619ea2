"""Parameter studies: cooling window, minimum drive, optimal gap, scaling law.

The control variable for the cooling rate is the lower gap ``delta21``;
everything else in the :class:`~qcool.model.Scenario` stays fixed.  Root
finding is plain bisection and maximisation is golden-section search, each
seeded by a coarse scan so the bracket is known to contain what we want.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .model import (
    Scenario,
    ScenarioError,
    rates_for,
    scenario_populations,
)
from .steady_state import closed_form_coefficients
from .thermo import (
    ThermoReport,
    abc_coefficients,
    cooling_rate,
    cooling_rate_grid,
    evaluate,
)

logger = logging.getLogger(__name__)

N_SCAN = 256
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

SWEEP_VARIABLES = ("delta21", "epsilon", "t_c", "t_h", "t_e", "lambda_e")


class AnalysisError(RuntimeError):
    """A study could not be carried out (no sign change, empty window, ...)."""


@dataclass(frozen=True)
class CoolingWindow:
    delta21_min: float
    delta21_max: float
    nonempty: bool

    @property
    def width(self) -> float:
        return self.delta21_max - self.delta21_min


@dataclass(frozen=True)
class OptimumPoint:
    delta21_star: float
    q_c_max: float
    window: CoolingWindow


@dataclass(frozen=True)
class ScalingFit:
    alpha: float
    intercept: float
    r_squared: float
    t_c: np.ndarray
    q_c_max: np.ndarray
    delta21_star: np.ndarray

    @property
    def grid(self) -> list[tuple[float, float]]:
        return list(zip(self.t_c.tolist(), self.q_c_max.tolist()))


@dataclass(frozen=True)
class EpsilonMin:
    """Minimum drive for cooling, three ways.

    ``numeric`` is the authoritative root of the full pipeline.
    ``formula`` is the textbook closed expression
    ``sqrt(C (n_h - n_e) / (A (1 - n_h)))``, kept for comparison only.
    ``flow_form`` solves the compact flow expression for ``q_c = 0``.
    Non-real values are reported as ``nan``.
    """

    numeric: float
    formula: float
    flow_form: float


@dataclass(frozen=True)
class SweepResult:
    variable: str
    grid: tuple
    reports: tuple
    errors: tuple

    def column(self, name: str) -> np.ndarray:
        """Values of a :class:`ThermoReport` field along the grid (``nan`` where absent)."""
        out = np.full(len(self.grid), np.nan)
        for i, r in enumerate(self.reports):
            if r is not None:
                v = getattr(r, name)
                if v is not None:
                    out[i] = v
        return out


def bisect_root(f: Callable[[float], float], lo: float, hi: float, xtol: float = 0.0,
                max_iter: int = 2000) -> float:
    """Root of ``f`` in ``[lo, hi]`` where ``f(lo) > 0 >= f(hi)`` or vice versa.

    Runs until the bracket is narrower than ``xtol`` or no floating-point
    number lies strictly between the ends (``xtol=0``, the default).
    Returns the end of the final bracket with the smaller ``|f|``.
    """
    f_lo, f_hi = f(lo), f(hi)
    if (f_lo > 0) == (f_hi > 0):
        raise AnalysisError(f"no sign change of the bracketed function on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi


def golden_section_max(f: Callable[[float], float], a: float, b: float, xtol: float = 1e-12
                       ) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on the open interval ``(a, b)``.

    Endpoints are never evaluated.  Returns ``(x, f(x))`` for the best
    point visited.
    """
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc >= fd else (d, fd)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            if not a < c < d:
                break
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            if not c < d < b:
                break
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
    return best


def _q_of_delta21(scenario: Scenario) -> Callable[[float], float]:
    return lambda x: cooling_rate(scenario.with_delta21(x))


def scan_grid(scenario: Scenario, n: int = N_SCAN) -> np.ndarray:
    """Coarse ``delta21`` grid: linear over ``(0, delta31)`` plus a log-spaced part.

    The log-spaced points reach down to ``1e-2 * T_c`` so that windows far
    narrower than the linear spacing (deep-cold baths) are still seen.
    """
    d31 = scenario.levels.delta31
    hi = d31 * (1.0 - 1e-9)
    lo = min(1e-6 * d31, 1e-2 * scenario.cold.temperature)
    return np.unique(np.concatenate([np.geomspace(lo, hi, n), np.linspace(hi / n, hi, n)]))


def cooling_window(scenario: Scenario, n_scan: int = N_SCAN) -> CoolingWindow:
    """Range of ``delta21`` with a positive cooling rate.

    ``delta21_min`` is 0 (an open endpoint) whenever the smallest scanned
    gap already cools.
    """
    grid = scan_grid(scenario, n_scan)
    positive = cooling_rate_grid(scenario, grid) > 0
    if not positive.any():
        return CoolingWindow(0.0, 0.0, False)
    f = _q_of_delta21(scenario)
    i = int(np.argmax(positive))
    lower = 0.0 if i == 0 else bisect_root(f, grid[i - 1], grid[i])
    rest = np.nonzero(~positive[i:])[0]
    if rest.size == 0:
        logger.warning("cooling persists up to delta21 -> delta31; window clipped at the scan end")
        return CoolingWindow(lower, float(grid[-1]), True)
    j = i + int(rest[0])
    upper = bisect_root(f, grid[j - 1], grid[j])
    if positive[j:].any():
        logger.warning("cooling rate changes sign again above delta21=%g; "
                       "only the first window is reported", upper)
    return CoolingWindow(float(lower), float(upper), True)


def absorption_window_formula(t_c: float, t_h: float, t_e: float, delta31: float) -> float:
    """Upper window edge of the undriven (heat-driven) chiller.

    It is where ``n_c n_e = n_h``:
    ``delta21_max = delta31 T_c (T_e - T_h) / (T_h (T_e - T_c))``.
    """
    if not 0 < t_c < t_h < t_e:
        raise ScenarioError(
            f"need 0 < t_c < t_h < t_e (got t_c={t_c!r}, t_h={t_h!r}, t_e={t_e!r})"
        )
    return delta31 * t_c * (t_e - t_h) / (t_h * (t_e - t_c))


def maximize_cooling_rate(scenario: Scenario, window: Optional[CoolingWindow] = None,
                          n_grid: int = N_SCAN, xtol: float = 1e-12) -> OptimumPoint:
    """Largest cooling rate over ``delta21`` inside the cooling window."""
    if window is None:
        window = cooling_window(scenario)
    if not window.nonempty:
        raise AnalysisError("cooling window is empty; nothing to maximise")
    pts = np.linspace(window.delta21_min, window.delta21_max, n_grid + 2)
    inner = pts[1:-1]
    k = int(np.argmax(cooling_rate_grid(scenario, inner)))
    x, q = golden_section_max(_q_of_delta21(scenario), pts[k], pts[k + 2], xtol)
    return OptimumPoint(float(x), float(q), window)


def approx_cooling_rate(scenario: Scenario) -> float:
    """Low-temperature approximation of the cooling rate at the scenario's gap.

    Keeps only the leading order in the cold-bath rates and evaluates the
    remaining coefficients with ``delta21 -> 0`` (so ``delta32 -> delta31``):
    ``q_c ~ delta21 * lam_c * (exp(-delta21/T_c) c_10 - c_20) / c_d0``.
    For a power-law cold bath this is
    ``delta21**(s+1) Lambda_c / (1 - exp(-delta21/T_c)) * (...)``.
    """
    d31, d21 = scenario.levels.delta31, scenario.levels.delta21
    limit = rates_for(scenario)
    le, leb = scenario.env.rates(d31)
    limit = type(limit)(limit.lambda_h, limit.lambda_h_bar, 0.0, 0.0, float(le), float(leb),
                        limit.epsilon)
    coeffs = closed_form_coefficients(limit)
    lc, _ = scenario.cold.rates(d21)
    boltz = math.exp(-d21 / scenario.cold.temperature)
    return float(d21 * lc * (boltz * coeffs.c_10 - coeffs.c_20) / coeffs.c_d0)


def epsilon_min(scenario: Scenario, eps_hi: Optional[float] = None) -> EpsilonMin:
    """Smallest drive strength that gives ``q_c > 0`` at the scenario's gap."""
    t_h, t_c, _ = scenario.temperatures
    if not t_c < t_h:
        raise ScenarioError(f"epsilon_min needs T_c < T_h (got T_c={t_c!r}, T_h={t_h!r})")
    rates = rates_for(scenario)
    pops = scenario_populations(scenario)
    abc = abc_coefficients(rates)
    ratio = abc.C / abc.A
    n_h, n_c, n_e = pops.n_h, pops.n_c, pops.n_e
    arg = ratio * (n_h - n_e) / (1.0 - n_h)
    formula = math.sqrt(arg) if arg >= 0 else math.nan
    if n_c > n_h:
        arg = ratio * (n_h - n_c * n_e) / (n_c - n_h)
        flow_form = math.sqrt(arg) if arg > 0 else 0.0
    else:
        flow_form = math.nan

    def f(eps: float) -> float:
        return cooling_rate(scenario.with_epsilon(eps))

    hi = eps_hi if eps_hi is not None else max(rates.lambda_h, rates.lambda_c, rates.lambda_e)
    f0 = f(0.0)
    if eps_hi is None:
        for _ in range(80):
            if f(hi) > 0:
                break
            hi *= 2.0
    if not f(hi) > 0:
        raise AnalysisError(f"q_c(epsilon) has no sign change on [0, {hi:.3g}]")
    if f0 >= 0:
        numeric = 0.0
    else:
        numeric = bisect_root(f, 0.0, hi)
    return EpsilonMin(float(numeric), formula, flow_form)


def scaling_exponent(scenario: Scenario, t_c_grid: Optional[Sequence[float]] = None
                     ) -> ScalingFit:
    """Fit ``q_c_max ~ T_c**alpha`` on a log-spaced cold-bath temperature grid.

    The default grid spans ``1e-4 .. 1e-2`` (times ``delta31``) with eight
    points per decade.
    """
    if t_c_grid is None:
        d31 = scenario.levels.delta31
        t_c_grid = np.geomspace(1e-4 * d31, 1e-2 * d31, 17)
    t_c = np.asarray(t_c_grid, dtype=float)
    if t_c.size < 2 or np.any(np.diff(t_c) <= 0):
        raise ValueError("t_c_grid must be strictly increasing with at least two points")
    q = np.empty_like(t_c)
    star = np.empty_like(t_c)
    for i, t in enumerate(t_c):
        opt = maximize_cooling_rate(scenario.with_bath("cold", temperature=float(t)))
        q[i], star[i] = opt.q_c_max, opt.delta21_star
    if np.any(q <= 0):
        raise AnalysisError("non-positive maximum cooling rate on the T_c grid")
    if np.any(np.diff(q) <= 0):
        raise AnalysisError("maximum cooling rate is not monotone in T_c on the grid")
    x, y = np.log(t_c), np.log(q)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    return ScalingFit(float(slope), float(intercept), r2, t_c, q, star)


def vary(scenario: Scenario, variable: str, value: float) -> Scenario:
    """Copy of ``scenario`` with one sweep variable set to ``value``."""
    if variable == "delta21":
        return scenario.with_delta21(value)
    if variable == "epsilon":
        return scenario.with_epsilon(value)
    if variable == "t_c":
        return scenario.with_bath("cold", temperature=value)
    if variable == "t_h":
        return scenario.with_bath("hot", temperature=value)
    if variable == "t_e":
        return scenario.with_bath("env", temperature=value)
    if variable == "lambda_e":
        return scenario.with_bath("env", coupling=value)
    raise ValueError(f"unknown sweep variable {variable!r}; expected one of {SWEEP_VARIABLES}")


def _sweep_point(scenario: Scenario, variable: str, value: float
                 ) -> tuple[Optional[ThermoReport], Optional[str]]:
    try:
        return evaluate(vary(scenario, variable, float(value))), None
    except (ScenarioError, ArithmeticError, RuntimeError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def sweep(scenario: Scenario, variable: str, grid: Sequence[float],
          workers: Optional[int] = None) -> SweepResult:
    """Thermodynamic report at every grid value of one variable.

    Failures at individual points are recorded in ``errors`` and the sweep
    carries on.  With ``workers > 1`` points run on a thread pool; results
    are always returned in grid order.
    """
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"unknown sweep variable {variable!r}; expected one of {SWEEP_VARIABLES}")
    values = [float(v) for v in grid]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda v: _sweep_point(scenario, variable, v), values))
    else:
        results = [_sweep_point(scenario, variable, v) for v in values]
    return SweepResult(
        variable=variable,
        grid=tuple(values),
        reports=tuple(r for r, _ in results),
        errors=tuple(e for _, e in results),
    )
