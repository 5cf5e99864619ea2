"""A chiller powered by heat alone.

With no drive, a hot enough environmental bath still pumps heat out of the
cold bath.  Cooling stops where n_c n_e = n_h, and the COP stays below the
reversible ceiling for a heat-driven cycle.
"""
from __future__ import annotations

from qcool import carnot_cop_absorption, cooling_window, evaluate, make_scenario
from qcool.analysis import absorption_window_formula
from qcool.figures import window_grid

for t_e in (0.25, 0.3, 0.4):
    s = make_scenario(delta21=0.1, epsilon=0.0, t_h=0.2, t_c=0.1, t_e=t_e)
    w = cooling_window(s)
    ceiling = carnot_cop_absorption(0.1, 0.2, t_e)
    best = max(evaluate(s.with_delta21(float(x))).cop_absorption for x in window_grid(w, 200))
    print(f"T_e = {t_e}: window top {w.delta21_max:.6f} "
          f"(closed expression {absorption_window_formula(0.1, 0.2, t_e, 1.0):.6f}), "
          f"best COP {best:.5f} vs ceiling {ceiling:.5f}")
