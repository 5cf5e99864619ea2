"""Deep-cold behaviour: q_c_max ~ T_c**(s_c + 1) and delta21* ~ T_c.

The exponent of the cold-bath spectral density controls how fast the best
achievable cooling rate dies as the cold bath approaches absolute zero.
"""
from __future__ import annotations

from qcool import approx_cooling_rate, make_scenario, maximize_cooling_rate, scaling_exponent

for s_c in (1.0, 2.0):
    s = make_scenario(delta21=0.01, epsilon=1e-3, t_h=0.03, t_c=0.005, t_e=0.03, s_c=s_c)
    fit = scaling_exponent(s)
    print(f"s_c = {s_c:g}: alpha = {fit.alpha:.4f} (r^2 = {fit.r_squared:.6f})")
    print("   T_c        delta21*/T_c")
    for t, d in list(zip(fit.t_c, fit.delta21_star))[::4]:
        print(f"   {t:.3e}  {d / t:.5f}")

print("\nlow-temperature approximation at the optimum")
for t_c in (0.005, 0.01, 0.02):
    s = make_scenario(delta21=0.01, epsilon=1e-3, t_h=0.03, t_c=t_c, t_e=0.03)
    opt = maximize_cooling_rate(s)
    approx = approx_cooling_rate(s.with_delta21(opt.delta21_star))
    print(f"  T_c = {t_c:<6g} exact {opt.q_c_max:.4e}  approx {approx:.4e}  "
          f"error {100 * abs(approx / opt.q_c_max - 1):.2f}%")
