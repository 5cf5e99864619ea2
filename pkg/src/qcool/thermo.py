"""Cycle-averaged thermodynamics of the stationary state.

Sign convention: every flow is positive when energy enters the system.
The cooling rate is therefore ``q_c`` and the power input ``w_dot``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .model import (
    EquilibriumPopulations,
    LevelStructure,
    RateSet,
    Scenario,
    ScenarioError,
    rates_for,
    transition_energies,
)
from .steady_state import (
    SteadyState,
    closed_form_coefficients,
    closed_form_components,
    solve_steady_state,
)

ABC_TOL = 1e-6


class Flows(NamedTuple):
    w_dot: float
    q_h: float
    q_c: float
    q_e: float


@dataclass(frozen=True)
class FlowCoefficientsABC:
    """Positive rate ratios of the compact flow form.

    ``w_dot = d32 eps^2 (A (n_c - n_h) + B)`` and
    ``q_c = d21 (eps^2 A (n_c - n_h) + C (n_c n_e - n_h))``, with
    ``A = 4 lh lc / D``, ``B = 4 (lhb + lcb)(le - leb) / D`` and
    ``C = lh lc le (lh + lc + le + leb) / D``.
    """

    A: float
    B: float
    C: float


@dataclass(frozen=True)
class ThermoReport:
    w_dot: float
    q_h: float
    q_c: float
    q_e: float
    s_dot: float
    first_law_residual: float
    cop_work: Optional[float]
    cop_absorption: Optional[float]
    scale: float

    @property
    def flows(self) -> Flows:
        return Flows(self.w_dot, self.q_h, self.q_c, self.q_e)


def energy_flows(ss: SteadyState, rates: RateSet, levels: LevelStructure) -> Flows:
    """Power and heat flows from the stationary populations and coherence."""
    d31, d21, d32 = transition_energies(levels)
    w = 2.0 * rates.epsilon * d32 * ss.p32.imag
    q_h = d31 * (-rates.lambda_h * ss.p33 + rates.lambda_h_bar * ss.p11)
    q_c = d21 * (-rates.lambda_c * ss.p22 + rates.lambda_c_bar * ss.p11)
    q_e = d32 * (-rates.lambda_e * ss.p33 + rates.lambda_e_bar * ss.p22)
    return Flows(float(w), float(q_h), float(q_c), float(q_e))


def flow_scale(ss: SteadyState, rates: RateSet, levels: LevelStructure) -> float:
    """Largest gross (one-directional) energy current in the cycle.

    Net flows are differences of these; rounding errors are relative to
    this scale, not to the (possibly vanishing) net values.
    """
    d31, d21, d32 = transition_energies(levels)
    terms = (
        d31 * rates.lambda_h * ss.p33, d31 * rates.lambda_h_bar * ss.p11,
        d21 * rates.lambda_c * ss.p22, d21 * rates.lambda_c_bar * ss.p11,
        d32 * rates.lambda_e * ss.p33, d32 * rates.lambda_e_bar * ss.p22,
        2.0 * rates.epsilon * d32 * abs(ss.p32),
    )
    return float(max(terms))


def abc_coefficients(rates: RateSet) -> FlowCoefficientsABC:
    D = closed_form_coefficients(rates).D
    lh, lhb = rates.lambda_h, rates.lambda_h_bar
    lc, lcb = rates.lambda_c, rates.lambda_c_bar
    le, leb = rates.lambda_e, rates.lambda_e_bar
    return FlowCoefficientsABC(
        A=4.0 * lh * lc / D,
        B=4.0 * (lhb + lcb) * (le - leb) / D,
        C=lh * lc * le * (lh + lc + le + leb) / D,
    )


def abc_flow_form(rates: RateSet, pops: EquilibriumPopulations, levels: LevelStructure
                  ) -> tuple[Flows, FlowCoefficientsABC]:
    """Flows from the compact A/B/C form, cross-checked against the p-form.

    ``pops`` must be the Boltzmann factors belonging to ``rates``.  Raises
    ``ValueError`` if the two forms disagree by more than ``ABC_TOL``
    relative to the gross flow scale.
    """
    d31, d21, d32 = transition_energies(levels)
    abc = abc_coefficients(rates)
    eps2 = rates.epsilon ** 2
    n_h, n_c, n_e = pops.n_h, pops.n_c, pops.n_e
    core = eps2 * abc.A * (n_c - n_h) + abc.C * (n_c * n_e - n_h)
    flows = Flows(
        w_dot=d32 * eps2 * (abc.A * (n_c - n_h) + abc.B),
        q_h=-d31 * core,
        q_c=d21 * core,
        q_e=-d32 * (eps2 * abc.B - abc.C * (n_c * n_e - n_h)),
    )
    ss = solve_steady_state(rates)
    reference = energy_flows(ss, rates, levels)
    scale = flow_scale(ss, rates, levels)
    worst = max(abs(a - b) for a, b in zip(flows, reference))
    if scale > 0 and worst > ABC_TOL * scale:
        raise ValueError(
            f"A/B/C flow form disagrees with the population form by {worst / scale:.3g} (relative)"
        )
    return flows, abc


def entropy_production(flows: Flows, t_h: float, t_c: float, t_e: float) -> float:
    """Entropy production rate ``-(q_h/T_h + q_c/T_c + q_e/T_e)``."""
    for name, t in (("t_h", t_h), ("t_c", t_c), ("t_e", t_e)):
        if not t > 0:
            raise ScenarioError(f"{name}: temperature must be positive (got {t!r})")
    return -(flows.q_h / t_h + flows.q_c / t_c + flows.q_e / t_e)


def entropy_production_expanded(rates: RateSet, pops: EquilibriumPopulations,
                                levels: LevelStructure, t_h: float, t_c: float,
                                t_e: float) -> float:
    """Three-term expansion of the entropy production, for cross-checks only.

    The last term uses the full ``C`` coefficient, including its
    ``(lh + lc + le + leb)`` factor.
    """
    d31, d21, d32 = transition_energies(levels)
    abc = abc_coefficients(rates)
    eps2 = rates.epsilon ** 2
    n_h, n_c, n_e = pops.n_h, pops.n_c, pops.n_e
    D = closed_form_coefficients(rates).D
    return (
        -eps2 * abc.A * (n_c - n_h) * (d21 / t_c - d31 / t_h)
        + 4.0 * eps2 * rates.lambda_e * (rates.lambda_c_bar + rates.lambda_h_bar) / D
        * (d32 / t_e) * (1.0 - n_e)
        - abc.C * (n_h - n_c * n_e) * (d31 / t_h - d21 / t_c - d32 / t_e)
    )


def cop_work(flows: Flows) -> Optional[float]:
    """Cooling rate per unit power; ``None`` unless power flows in."""
    if not flows.w_dot > 0:
        return None
    return flows.q_c / flows.w_dot


def cop_absorption(flows: Flows) -> Optional[float]:
    """Cooling rate per unit heat drawn from the environmental bath."""
    if not flows.q_e > 0:
        return None
    return flows.q_c / flows.q_e


def carnot_cop_work(t_c: float, t_h: float) -> float:
    if not 0 < t_c < t_h:
        raise ScenarioError(f"need 0 < t_c < t_h (got t_c={t_c!r}, t_h={t_h!r})")
    return t_c / (t_h - t_c)


def carnot_cop_absorption(t_c: float, t_h: float, t_e: float) -> float:
    """Reversible limit for a heat-driven chiller; ``t_e = inf`` is allowed."""
    if not 0 < t_c < t_h < t_e:
        raise ScenarioError(
            f"need 0 < t_c < t_h < t_e (got t_c={t_c!r}, t_h={t_h!r}, t_e={t_e!r})"
        )
    return (1.0 / t_h - 1.0 / t_e) / (1.0 / t_c - 1.0 / t_h)


def thermo_report(ss: SteadyState, rates: RateSet, levels: LevelStructure,
                  t_h: float, t_c: float, t_e: float) -> ThermoReport:
    flows = energy_flows(ss, rates, levels)
    return ThermoReport(
        w_dot=flows.w_dot,
        q_h=flows.q_h,
        q_c=flows.q_c,
        q_e=flows.q_e,
        s_dot=entropy_production(flows, t_h, t_c, t_e),
        first_law_residual=math.fsum(flows),
        cop_work=cop_work(flows),
        cop_absorption=cop_absorption(flows),
        scale=flow_scale(ss, rates, levels),
    )


def evaluate(scenario: Scenario, method: str = "closed_form") -> ThermoReport:
    """Scenario -> rates -> stationary state -> thermodynamic report."""
    rates = rates_for(scenario)
    ss = solve_steady_state(rates, method)
    return thermo_report(ss, rates, scenario.levels, *scenario.temperatures)


def cooling_rate(scenario: Scenario) -> float:
    """Stationary ``q_c`` via the closed form, without building a report."""
    rates = rates_for(scenario)
    p11, p22, _, _ = closed_form_components(closed_form_coefficients(rates), rates)
    return float(scenario.levels.delta21 * (-rates.lambda_c * p22 + rates.lambda_c_bar * p11))


def cooling_rate_grid(scenario: Scenario, delta21) -> np.ndarray:
    """Vectorised ``q_c`` over an array of ``delta21`` values (other data fixed)."""
    d21 = np.asarray(delta21, dtype=float)
    d31 = scenario.levels.delta31
    if np.any(d21 <= 0) or np.any(d21 >= d31):
        raise ScenarioError("levels.delta21: grid values must lie in (0, delta31)")
    lh, lhb = scenario.hot.rates(d31)
    lc, lcb = scenario.cold.rates(d21)
    le, leb = scenario.env.rates(d31 - d21)
    rates = RateSet(lh, lhb, lc, lcb, le, leb, scenario.drive.epsilon)
    p11, p22, _, _ = closed_form_components(closed_form_coefficients(rates), rates)
    return d21 * (-lc * p22 + lcb * p11)
