"""Stationary state of the resonantly driven three-level system.

Two independent routes are provided:

``steady_state_closed_form``
    Rational expressions in the six bath rates and the drive strength
    (numerators and a common denominator ``D``, all polynomials with
    non-negative terms except the coherence numerator).
``steady_state_nullspace``
    Dense solve of the 5x5 real generator assembled from the Lindblad
    dissipators, with one balance row swapped for the trace condition.

State vectors use the ordering ``(p11, p22, p33, Re p32, Im p32)``, where
``p32 = <P32>`` is the expectation of ``|3><2|`` in the frame rotating at
the drive frequency, i.e. the density-matrix element ``rho_23`` with the
drive phase removed.  At resonance ``p32`` is purely imaginary and
``Im p32 > 0`` means the drive pumps population from level 2 to level 3.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, fields

import numpy as np

from .model import RateSet

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-8
MAX_CONDITION = 1e12
NEGATIVE_POPULATION_TOL = 1e-12


class SteadyStateError(RuntimeError):
    """The stationary state could not be computed reliably."""


@dataclass(frozen=True)
class SteadyState:
    p11: float
    p22: float
    p33: float
    p32: complex

    @property
    def p23(self) -> complex:
        return self.p32.conjugate()

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.p11, self.p22, self.p33])

    def as_vector(self) -> np.ndarray:
        return np.array([self.p11, self.p22, self.p33, self.p32.real, self.p32.imag])

    @classmethod
    def from_vector(cls, v) -> "SteadyState":
        v = np.asarray(v, dtype=float)
        return cls(float(v[0]), float(v[1]), float(v[2]), complex(v[3], v[4]))


@dataclass(frozen=True)
class ClosedFormCoefficients:
    """Rate polynomials of the closed-form stationary state.

    Unbarred coefficients multiply powers of ``lambda_c``, barred ones
    (``*_bar``) multiply ``lambda_c_bar`` or ``lambda_c * lambda_c_bar``.
    ``D`` is the full denominator at the given cold-bath rates.
    """

    c_d0: float
    c_d1: float
    c_d1_bar: float
    c_d2: float
    c_d2_bar: float
    c_10: float
    c_11: float
    c_12: float
    c_20: float
    c_21: float
    c_21_bar: float
    c_22_bar: float
    c_30: float
    c_31: float
    c_31_bar: float
    c_32: float
    c_32_bar: float
    c_c0: float
    c_c1: float
    c_c1_bar: float
    D: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def closed_form_coefficients(rates: RateSet) -> ClosedFormCoefficients:
    """Evaluate every coefficient of the closed-form stationary state.

    Works elementwise if the rates are numpy arrays.
    """
    lh, lhb = rates.lambda_h, rates.lambda_h_bar
    lc, lcb = rates.lambda_c, rates.lambda_c_bar
    le, leb = rates.lambda_e, rates.lambda_e_bar
    eps = rates.epsilon
    e2 = 4.0 * eps * eps
    s = lh + le + leb

    c_d0 = s * ((lh + lhb) * leb + le * lhb) + e2 * (lh + 2.0 * lhb)
    c_d1 = s * (lh + lhb + le) + (lh + lhb) * leb + le * lhb + e2
    c_d1_bar = s * s + 2.0 * e2
    c_d2 = lh + lhb + le
    c_d2_bar = s

    c_10 = s * lh * leb + e2 * lh
    c_11 = s * (lh + le) + lh * leb + e2
    c_12 = lh + le

    c_20 = s * le * lhb + e2 * lhb
    c_21 = le * lhb
    c_21_bar = s * (lh + le) + e2
    c_22_bar = lh + le

    c_30 = s * leb * lhb + e2 * lhb
    c_31 = s * lhb + leb * lhb
    c_31_bar = s * leb + e2
    c_32 = lhb
    c_32_bar = leb

    c_c0 = 2.0 * eps * lhb * (le - leb)
    c_c1 = -2.0 * eps * lhb
    c_c1_bar = 2.0 * eps * (lh + le - leb)

    D = c_d0 + c_d1 * lc + c_d1_bar * lcb + c_d2 * lc * lc + c_d2_bar * lc * lcb
    return ClosedFormCoefficients(
        c_d0, c_d1, c_d1_bar, c_d2, c_d2_bar,
        c_10, c_11, c_12,
        c_20, c_21, c_21_bar, c_22_bar,
        c_30, c_31, c_31_bar, c_32, c_32_bar,
        c_c0, c_c1, c_c1_bar,
        D,
    )


def closed_form_components(coeffs: ClosedFormCoefficients, rates: RateSet):
    """Return ``(p11, p22, p33, im_p32)`` without constructing a SteadyState.

    Array-friendly; used by the vectorised scans in :mod:`qcool.analysis`.
    """
    c = coeffs
    lc, lcb = rates.lambda_c, rates.lambda_c_bar
    p11 = (c.c_10 + c.c_11 * lc + c.c_12 * lc * lc) / c.D
    p22 = (c.c_20 + c.c_21 * lc + c.c_21_bar * lcb + c.c_22_bar * lc * lcb) / c.D
    p33 = (c.c_30 + c.c_31 * lc + c.c_31_bar * lcb + c.c_32 * lc * lc
           + c.c_32_bar * lc * lcb) / c.D
    im_p32 = (c.c_c0 + c.c_c1 * lc + c.c_c1_bar * lcb) / c.D
    return p11, p22, p33, im_p32


def steady_state_closed_form(coeffs: ClosedFormCoefficients, rates: RateSet) -> SteadyState:
    """Stationary state from the closed-form ratios.

    The populations are not renormalised: if they fail to sum to one within
    ``NORMALIZATION_TOL`` a :class:`SteadyStateError` is raised.
    """
    if not coeffs.D > 0:
        raise SteadyStateError(f"closed-form denominator is not positive (D={coeffs.D!r})")
    p11, p22, p33, im_p32 = closed_form_components(coeffs, rates)
    total = p11 + p22 + p33
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise SteadyStateError(
            f"closed-form populations sum to {total!r}, not 1; coefficient set is inconsistent"
        )
    return SteadyState(float(p11), float(p22), float(p33), complex(0.0, im_p32))


# Operators on C^3 used to assemble the generator.
def _ket_bra(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


def _dissipator(jump: np.ndarray, rho: np.ndarray) -> np.ndarray:
    jd = jump.conj().T
    jdj = jd @ jump
    return jump @ rho @ jd - 0.5 * (jdj @ rho + rho @ jdj)


def _density_from_vector(v) -> np.ndarray:
    rho = np.diag(np.asarray(v[:3], dtype=complex))
    p32 = complex(v[3], v[4])
    rho[1, 2] = p32  # <P32> = rho_23
    rho[2, 1] = p32.conjugate()
    return rho


def _vector_from_density(rho: np.ndarray) -> np.ndarray:
    return np.array([rho[0, 0].real, rho[1, 1].real, rho[2, 2].real,
                     rho[1, 2].real, rho[1, 2].imag])


def lindblad_rhs(rates: RateSet, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation in the rotating frame.

    Each bath contributes a decay channel (jump ``|low><high|``, rate
    ``lam``) and an excitation channel (jump ``|high><low|``, rate
    ``lam_bar``).  The rotating-frame Hamiltonian at resonance is
    ``epsilon (|3><2| + |2><3|)`` plus a common shift of levels 2 and 3
    that only rotates the 1-2 and 1-3 coherences, so it is dropped.
    """
    hamiltonian = rates.epsilon * (_ket_bra(3, 2) + _ket_bra(2, 3))
    channels = (
        (rates.lambda_h, _ket_bra(1, 3)),
        (rates.lambda_h_bar, _ket_bra(3, 1)),
        (rates.lambda_c, _ket_bra(1, 2)),
        (rates.lambda_c_bar, _ket_bra(2, 1)),
        (rates.lambda_e, _ket_bra(2, 3)),
        (rates.lambda_e_bar, _ket_bra(3, 2)),
    )
    out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for rate, jump in channels:
        out += rate * _dissipator(jump, rho)
    return out


def build_generator(rates: RateSet) -> np.ndarray:
    """Real 5x5 generator on ``(p11, p22, p33, Re p32, Im p32)``.

    Built column by column by applying the full Lindblad right-hand side to
    basis density matrices, so it inherits the structure of the dissipators
    rather than any hand-written rate equations.
    """
    G = np.empty((5, 5))
    for k in range(5):
        e_k = np.zeros(5)
        e_k[k] = 1.0
        drho = lindblad_rhs(rates, _density_from_vector(e_k))
        leak = max(abs(drho[0, 1]), abs(drho[0, 2]))
        if leak > 0:
            raise SteadyStateError("generator couples the 1-2/1-3 coherences to the 2-3 block")
        G[:, k] = _vector_from_density(drho)
    return G


def generator_norm(G: np.ndarray) -> float:
    """Maximum absolute row sum."""
    return float(np.abs(G).sum(axis=1).max())


def steady_state_nullspace(G: np.ndarray) -> SteadyState:
    """Solve ``G v = 0`` with the first balance row replaced by the trace.

    The trace row is scaled by ``||G||`` so the augmented matrix is not
    artificially ill-conditioned when the rates are small.
    """
    G = np.asarray(G, dtype=float)
    scale = generator_norm(G)
    if scale == 0:
        raise SteadyStateError("generator is identically zero")
    A = G.copy()
    A[0] = [scale, scale, scale, 0.0, 0.0]
    b = np.zeros(5)
    b[0] = scale
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SteadyStateError(f"augmented stationary system is near-singular (cond={cond:.3g})")
    v = np.linalg.solve(A, b)
    if v[:3].min() < -NEGATIVE_POPULATION_TOL:
        raise SteadyStateError(f"negative stationary population {v[:3].min():.3g}")
    return SteadyState.from_vector(v)


def solve_steady_state(rates: RateSet, method: str = "closed_form") -> SteadyState:
    """Stationary state by either route (``"closed_form"`` or ``"nullspace"``)."""
    if method == "closed_form":
        return steady_state_closed_form(closed_form_coefficients(rates), rates)
    if method == "nullspace":
        return steady_state_nullspace(build_generator(rates))
    raise ValueError(f"unknown steady-state method {method!r}")
