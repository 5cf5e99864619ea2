"""Steady-state thermodynamics of a driven three-level quantum refrigerator."""
from __future__ import annotations

__version__ = "0.1.0"

from .analysis import (
    AnalysisError,
    CoolingWindow,
    EpsilonMin,
    OptimumPoint,
    ScalingFit,
    approx_cooling_rate,
    cooling_window,
    epsilon_min,
    maximize_cooling_rate,
    scaling_exponent,
    sweep,
)
from .config import ConfigError, ScenarioConfig, format_config, parse_config, parse_config_text
from .dynamics import DensityState, IntegrationError, IntegrationSettings, evolve_to_steady, trajectory
from .figures import run_figure
from .model import (
    BathSpec,
    DriveSpec,
    LevelStructure,
    RateSet,
    Scenario,
    ScenarioError,
    make_scenario,
    rates_for,
    validate_scenario,
)
from .steady_state import SteadyState, SteadyStateError, build_generator, solve_steady_state
from .thermo import ThermoReport, carnot_cop_absorption, carnot_cop_work, evaluate
