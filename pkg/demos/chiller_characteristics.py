"""Cooling window, optimum and the COP-versus-cooling-rate loop.

With the environmental bath attached the characteristic curve is a closed
loop: the COP vanishes at both ends of the cooling window.  Without it the
COP climbs to the reversible limit T_c / (T_h - T_c) at the upper edge.
"""
from __future__ import annotations

from qcool import carnot_cop_work, cooling_window, evaluate, make_scenario, maximize_cooling_rate
from qcool.figures import window_grid

for coupling_e in (0.0, 1e-3):
    s = make_scenario(delta21=0.3, epsilon=1e-3, t_h=0.2, t_c=0.1, t_e=0.2, coupling_e=coupling_e)
    w = cooling_window(s)
    opt = maximize_cooling_rate(s, w)
    print(f"\nenvironmental coupling {coupling_e:g}")
    print(f"  cooling window  ({w.delta21_min:.4g}, {w.delta21_max:.6f})")
    print(f"  best gap {opt.delta21_star:.6f} cools at {opt.q_c_max:.4e}")
    print("  delta21      q_c          COP")
    for x in window_grid(w, 8):
        r = evaluate(s.with_delta21(float(x)))
        print(f"  {x:.6f}  {r.q_c:.4e}  {r.cop_work:.6f}")

print("\nreversible limit:", carnot_cop_work(0.1, 0.2))
