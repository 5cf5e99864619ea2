"""Time evolution of the rotating-frame master equation.

The generator from :func:`qcool.steady_state.build_generator` is constant
at resonance, so the classical fourth-order Runge-Kutta step reduces to
multiplication by the degree-4 Taylor polynomial of ``dt * G``.  ``step``
spells out the four stages; the long runs use the precomputed propagator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .steady_state import generator_norm

TRACE_DRIFT_TOL = 1e-8


class IntegrationError(RuntimeError):
    """Trace drift or failure to reach the steady state."""


@dataclass(frozen=True)
class DensityState:
    """Populations and rotating-frame coherence ``p32 = <|3><2|>`` at ``time``."""

    rho11: float
    rho22: float
    rho33: float
    re_coh: float
    im_coh: float
    time: float = 0.0

    @property
    def trace(self) -> float:
        return self.rho11 + self.rho22 + self.rho33

    def as_vector(self) -> np.ndarray:
        return np.array([self.rho11, self.rho22, self.rho33, self.re_coh, self.im_coh])

    @classmethod
    def from_vector(cls, v, time: float = 0.0) -> "DensityState":
        v = np.asarray(v, dtype=float)
        return cls(*(float(x) for x in v[:5]), time=float(time))

    @classmethod
    def ground(cls) -> "DensityState":
        return cls(1.0, 0.0, 0.0, 0.0, 0.0)

    @classmethod
    def excited(cls) -> "DensityState":
        return cls(0.0, 0.0, 1.0, 0.0, 0.0)


@dataclass(frozen=True)
class IntegrationSettings:
    """``dt=None`` picks ``0.1 / ||G||``; ``t_max=None`` picks ``1e6 / ||G||``."""

    dt: Optional[float] = None
    t_max: Optional[float] = None
    steady_tol: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("dt", "t_max"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive (got {v!r})")
        if not self.steady_tol > 0:
            raise ValueError(f"steady_tol must be positive (got {self.steady_tol!r})")

    def resolve(self, G: np.ndarray) -> tuple[float, float]:
        norm = generator_norm(G)
        dt = self.dt if self.dt is not None else 0.1 / norm
        t_max = self.t_max if self.t_max is not None else 1e6 / norm
        return dt, t_max


def _check_trace(before: float, after: float) -> None:
    if abs(after - before) > TRACE_DRIFT_TOL:
        raise IntegrationError(f"trace drifted from {before!r} to {after!r} in one step")


def step(G: np.ndarray, state: DensityState, dt: float) -> DensityState:
    """One classical RK4 step of ``dv/dt = G v``."""
    v = state.as_vector()
    k1 = G @ v
    k2 = G @ (v + 0.5 * dt * k1)
    k3 = G @ (v + 0.5 * dt * k2)
    k4 = G @ (v + dt * k3)
    new = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_trace(v[:3].sum(), new[:3].sum())
    return DensityState.from_vector(new, state.time + dt)


def rk4_propagator(G: np.ndarray, dt: float) -> np.ndarray:
    """Matrix applied by one RK4 step of a linear constant system."""
    h = dt * np.asarray(G, dtype=float)
    eye = np.eye(h.shape[0])
    h2 = h @ h
    h3 = h2 @ h
    return eye + h + h2 / 2.0 + h3 / 6.0 + h3 @ h / 24.0


def derivative_residual(G: np.ndarray, v) -> float:
    """``||G v||_inf / ||G||``, a scale-free measure of distance from stationarity."""
    return float(np.abs(G @ np.asarray(v)).max() / generator_norm(G))


def _adapted_dt(G: np.ndarray, v: np.ndarray, dt: float, local_tol: float) -> float:
    # step doubling: halve dt until one step and two half steps agree
    for _ in range(30):
        full = rk4_propagator(G, dt) @ v
        half = rk4_propagator(G, dt / 2.0)
        err = float(np.abs(full - half @ (half @ v)).max())
        if err <= local_tol:
            return dt
        dt /= 2.0
    raise IntegrationError("step-doubling could not meet the local error tolerance")


def evolve_to_steady(G: np.ndarray, state0: DensityState,
                     settings: IntegrationSettings = IntegrationSettings(),
                     local_tol: float = 1e-9) -> tuple[DensityState, float, float]:
    """Integrate until ``derivative_residual < settings.steady_tol``.

    Returns ``(state, elapsed_time, residual)``.  Raises
    :class:`IntegrationError` with the final residual if ``t_max`` is hit.
    """
    G = np.asarray(G, dtype=float)
    dt, t_max = settings.resolve(G)
    v = state0.as_vector()
    t = 0.0
    residual = derivative_residual(G, v)
    if residual < settings.steady_tol:
        return state0, 0.0, residual
    dt = _adapted_dt(G, v, dt, local_tol)
    M = rk4_propagator(G, dt)
    n_max = int(math.ceil(t_max / dt))
    for _ in range(n_max):
        trace = v[:3].sum()
        v = M @ v
        t += dt
        _check_trace(trace, v[:3].sum())
        residual = derivative_residual(G, v)
        if residual < settings.steady_tol:
            return DensityState.from_vector(v, state0.time + t), t, residual
    raise IntegrationError(
        f"no steady state within t_max={t_max:.3g}; final residual {residual:.3g}"
    )


def trajectory(G: np.ndarray, state0: DensityState, t_grid: Sequence[float],
               dt: Optional[float] = None) -> list[DensityState]:
    """States at the requested times (relative to ``state0.time``).

    Between samples the integrator takes equal sub-steps no longer than
    ``dt`` (default ``0.1 / ||G||``), landing exactly on every sample time.
    """
    G = np.asarray(G, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        return []
    if t_grid[0] < 0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be non-negative and strictly increasing")
    h_max = dt if dt is not None else 0.1 / generator_norm(G)
    v = state0.as_vector()
    t = 0.0
    out = []
    for target in t_grid:
        span = target - t
        if span > 0:
            n = max(1, int(math.ceil(span / h_max)))
            M = rk4_propagator(G, span / n)
            for _ in range(n):
                trace = v[:3].sum()
                v = M @ v
                _check_trace(trace, v[:3].sum())
            t = target
        out.append(DensityState.from_vector(v, state0.time + target))
    return out
