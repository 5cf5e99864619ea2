"""Problem data for the driven three-level cooling cycle.

Levels 1 < 2 < 3 with E_1 = 0.  The 1-3 transition couples to a hot bath,
1-2 to a cold bath, and 2-3 to the resonant drive plus an environmental
bath.  Units are hbar = k_B = 1, so every quantity here is dimensionless.

Each bath is reduced to a pair of rates for its transition: ``lam`` (decay,
heat released to the bath) and ``lam_bar`` (excitation, heat drawn from the
bath), tied together by detailed balance ``lam_bar = exp(-delta/T) * lam``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

BATH_LABELS = ("hot", "cold", "env")
BATH_MODELS = ("white", "power_law")


class ScenarioError(ValueError):
    """Raised for invalid problem data; the message names the offending field."""


def _require_positive(value: float, name: str, what: str = "value") -> None:
    if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value)):
        raise ScenarioError(f"{name}: {what} must be a finite number (got {value!r})")
    if value <= 0:
        raise ScenarioError(f"{name}: {what} must be positive (got {value!r})")


@dataclass(frozen=True)
class LevelStructure:
    """Transition energies of the three-level system.

    ``delta32`` is always derived from the other two.
    """

    delta31: float
    delta21: float

    def __post_init__(self) -> None:
        _require_positive(self.delta31, "levels.delta31", "energy")
        if not math.isfinite(self.delta21) or self.delta21 <= 0:
            raise ScenarioError(
                f"levels.delta21: must satisfy 0 < delta21 < delta31 (got {self.delta21!r})"
            )
        if self.delta21 >= self.delta31:
            raise ScenarioError(
                "levels.delta21: must satisfy 0 < delta21 < delta31 "
                f"(got delta21={self.delta21!r}, delta31={self.delta31!r})"
            )

    @property
    def delta32(self) -> float:
        return self.delta31 - self.delta21

    @property
    def energies(self) -> tuple[float, float, float]:
        return (0.0, self.delta21, self.delta31)


@dataclass(frozen=True)
class DriveSpec:
    """Resonant classical drive; the frequency follows the 2-3 gap."""

    epsilon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.epsilon) or self.epsilon < 0:
            raise ScenarioError(f"drive.epsilon: must be non-negative (got {self.epsilon!r})")


@dataclass(frozen=True)
class BathSpec:
    """One heat reservoir attached to one transition.

    ``model`` is ``"white"`` (flat mode density, rate = coupling) or
    ``"power_law"`` (spectral strength ``coupling * delta**exponent`` with
    Bose-Einstein occupation).  The environmental bath may have zero
    coupling, which detaches it.
    """

    label: str
    temperature: float
    coupling: float
    model: str = "white"
    exponent: Optional[float] = None

    def __post_init__(self) -> None:
        if self.label not in BATH_LABELS:
            raise ScenarioError(f"bath label must be one of {BATH_LABELS} (got {self.label!r})")
        prefix = f"bath.{self.label}"
        _require_positive(self.temperature, f"{prefix}.temperature", "temperature")
        if self.label == "env":
            if not math.isfinite(self.coupling) or self.coupling < 0:
                raise ScenarioError(
                    f"{prefix}.coupling: must be non-negative (got {self.coupling!r})"
                )
        else:
            _require_positive(self.coupling, f"{prefix}.coupling", "coupling")
        if self.model not in BATH_MODELS:
            raise ScenarioError(
                f"{prefix}.model: must be one of {BATH_MODELS} (got {self.model!r})"
            )
        if self.model == "power_law":
            if self.exponent is None:
                raise ScenarioError(f"{prefix}.exponent: required for the power_law model")
            if not math.isfinite(self.exponent) or self.exponent <= 0:
                raise ScenarioError(
                    f"{prefix}.exponent: spectral exponent must be positive (got {self.exponent!r})"
                )
        elif self.exponent is not None:
            raise ScenarioError(f"{prefix}.exponent: only meaningful for the power_law model")

    def rates(self, delta):
        """Return ``(lam, lam_bar)`` for a transition of energy ``delta``."""
        if self.model == "white":
            return white_bath_rates(self.coupling, delta, self.temperature, allow_zero=True)
        return power_law_bath_rates(self.coupling, self.exponent, delta, self.temperature)


@dataclass(frozen=True)
class Scenario:
    """Full problem statement: levels, drive and the three baths."""

    levels: LevelStructure
    drive: DriveSpec
    hot: BathSpec
    cold: BathSpec
    env: BathSpec

    @property
    def omega(self) -> float:
        return self.levels.delta32

    @property
    def temperatures(self) -> tuple[float, float, float]:
        return (self.hot.temperature, self.cold.temperature, self.env.temperature)

    def with_delta21(self, delta21: float) -> "Scenario":
        return replace(self, levels=LevelStructure(self.levels.delta31, delta21))

    def with_epsilon(self, epsilon: float) -> "Scenario":
        return replace(self, drive=DriveSpec(epsilon))

    def with_bath(self, label: str, **changes) -> "Scenario":
        bath = replace(getattr(self, label), **changes)
        return replace(self, **{label: bath})


@dataclass(frozen=True)
class RateSet:
    """Decay/excitation rates of the three baths plus the drive strength."""

    lambda_h: float
    lambda_h_bar: float
    lambda_c: float
    lambda_c_bar: float
    lambda_e: float
    lambda_e_bar: float
    epsilon: float

    def scaled(self, k: float) -> "RateSet":
        return RateSet(*(k * v for v in self.as_tuple()))

    def as_tuple(self) -> tuple:
        return (
            self.lambda_h,
            self.lambda_h_bar,
            self.lambda_c,
            self.lambda_c_bar,
            self.lambda_e,
            self.lambda_e_bar,
            self.epsilon,
        )


@dataclass(frozen=True)
class EquilibriumPopulations:
    """Boltzmann factors of the three transitions at their bath temperatures."""

    n_h: float
    n_c: float
    n_e: float


def transition_energies(levels: LevelStructure) -> tuple[float, float, float]:
    """Return ``(delta31, delta21, delta32)``."""
    return levels.delta31, levels.delta21, levels.delta32


def white_bath_rates(coupling, delta, temperature, allow_zero=False):
    """Rates for a bath with a flat mode density: ``lam = coupling``.

    Examples
    --------
    >>> lam, lam_bar = white_bath_rates(1e-3, 1.0, 0.2)
    >>> round(lam_bar / lam, 10) == round(math.exp(-5), 10)
    True
    """
    if allow_zero:
        if np.any(np.asarray(coupling) < 0):
            raise ScenarioError(f"coupling must be non-negative (got {coupling!r})")
    elif np.any(np.asarray(coupling) <= 0):
        raise ScenarioError(f"coupling must be positive (got {coupling!r})")
    if np.any(np.asarray(delta) <= 0):
        raise ScenarioError(f"transition energy must be positive (got {delta!r})")
    if np.any(np.asarray(temperature) <= 0):
        raise ScenarioError(f"temperature must be positive (got {temperature!r})")
    lam = coupling * np.ones(np.shape(delta)) if np.ndim(delta) else coupling
    return lam, lam * np.exp(-np.divide(delta, temperature))


def power_law_bath_rates(coupling, exponent, delta, temperature):
    """Rates for a harmonic bath with spectral strength ``coupling * delta**exponent``.

    ``lam = J / (1 - exp(-delta/T))`` and ``lam_bar = J / (exp(delta/T) - 1)``.
    ``lam_bar`` is evaluated as ``lam * exp(-delta/T)`` so that detailed
    balance holds to rounding and large ``delta/T`` underflows to zero
    instead of overflowing.
    """
    if coupling <= 0:
        raise ScenarioError(f"coupling must be positive (got {coupling!r})")
    if exponent is None or exponent <= 0:
        raise ScenarioError(f"spectral exponent must be positive (got {exponent!r})")
    if np.any(np.asarray(delta) <= 0):
        raise ScenarioError(
            f"transition energy must be positive (got {delta!r}); delta = 0 is a limit, not a point"
        )
    if np.any(np.asarray(temperature) <= 0):
        raise ScenarioError(f"temperature must be positive (got {temperature!r})")
    x = np.divide(delta, temperature)
    lam = coupling * np.power(delta, exponent) / -np.expm1(-x)
    return lam, lam * np.exp(-x)


def equilibrium_populations(levels: LevelStructure, t_h: float, t_c: float, t_e: float
                            ) -> EquilibriumPopulations:
    for name, t in (("t_h", t_h), ("t_c", t_c), ("t_e", t_e)):
        _require_positive(t, name, "temperature")
    d31, d21, d32 = transition_energies(levels)
    return EquilibriumPopulations(
        n_h=math.exp(-d31 / t_h), n_c=math.exp(-d21 / t_c), n_e=math.exp(-d32 / t_e)
    )


def scenario_populations(scenario: Scenario) -> EquilibriumPopulations:
    return equilibrium_populations(
        scenario.levels, scenario.hot.temperature, scenario.cold.temperature,
        scenario.env.temperature,
    )


def rates_for(scenario: Scenario) -> RateSet:
    """Evaluate the bath models on their transitions."""
    d31, d21, d32 = transition_energies(scenario.levels)
    lh, lhb = scenario.hot.rates(d31)
    lc, lcb = scenario.cold.rates(d21)
    le, leb = scenario.env.rates(d32)
    return RateSet(float(lh), float(lhb), float(lc), float(lcb), float(le), float(leb),
                   float(scenario.drive.epsilon))


def validate_scenario(scenario: Scenario) -> Scenario:
    """Check every invariant of ``scenario`` and return it unchanged.

    Component dataclasses already validate on construction; this re-runs the
    checks so objects assembled by other means (``object.__new__``,
    unpickling) are covered too, and verifies the bath labels sit in the
    right slots.
    """
    if not isinstance(scenario, Scenario):
        raise ScenarioError(f"expected a Scenario (got {type(scenario).__name__})")
    LevelStructure.__post_init__(scenario.levels)
    DriveSpec.__post_init__(scenario.drive)
    for label in BATH_LABELS:
        bath = getattr(scenario, label)
        if bath.label != label:
            raise ScenarioError(f"bath.{label}: slot holds a bath labelled {bath.label!r}")
        BathSpec.__post_init__(bath)
    return scenario


def make_scenario(
    *,
    delta21: float,
    epsilon: float,
    t_h: float,
    t_c: float,
    t_e: float,
    coupling_h: float = 1e-3,
    coupling_c: float = 1e-3,
    coupling_e: float = 1e-3,
    s_c: Optional[float] = 1.0,
    delta31: float = 1.0,
) -> Scenario:
    """Shortcut for the usual set-up: white hot/env baths, power-law cold bath.

    Pass ``s_c=None`` for a white cold bath.
    """
    cold = (
        BathSpec("cold", t_c, coupling_c)
        if s_c is None
        else BathSpec("cold", t_c, coupling_c, "power_law", float(s_c))
    )
    return Scenario(
        levels=LevelStructure(delta31, delta21),
        drive=DriveSpec(epsilon),
        hot=BathSpec("hot", t_h, coupling_h),
        cold=cold,
        env=BathSpec("env", t_e, coupling_e),
    )
