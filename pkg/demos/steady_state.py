"""Stationary state of the driven three-level refrigerator, two ways.

The closed-form rate ratios and a direct null-space solve of the 5x5
generator should agree to rounding.  We then follow the density matrix in
time from the ground state and watch it settle onto the same point.
"""
from __future__ import annotations

import numpy as np

from qcool import DensityState, build_generator, evolve_to_steady, make_scenario, rates_for
from qcool import solve_steady_state, trajectory

# %% A chiller: cold bath at 0.1, hot and environmental baths at 0.2
scenario = make_scenario(delta21=0.3, epsilon=1e-3, t_h=0.2, t_c=0.1, t_e=0.2)
rates = rates_for(scenario)
print(rates)

closed = solve_steady_state(rates, "closed_form")
nullspace = solve_steady_state(rates, "nullspace")
print("closed form:", closed)
print("null space :", nullspace)
print("max |diff| :", np.abs(closed.as_vector() - nullspace.as_vector()).max())

# %% Relaxation from the ground state
G = build_generator(rates)
final, elapsed, residual = evolve_to_steady(G, DensityState.ground())
print(f"\nrelaxed after t = {elapsed:.4g} (residual {residual:.2e})")
for st in trajectory(G, DensityState.ground(), np.linspace(0, elapsed, 6)):
    print(f"  t={st.time:10.4g}  p11={st.rho11:.6f}  p22={st.rho22:.6f}  "
          f"p33={st.rho33:.6f}  Im p32={st.im_coh:+.3e}")
print("distance to algebraic state:", np.abs(final.as_vector() - closed.as_vector()).max())
