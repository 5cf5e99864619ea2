"""How hard must the 2-3 transition be driven before the cold bath cools?

The numeric root of q_c(epsilon) is compared with the compact flow-form
expression.  A hotter environmental bath lowers the threshold.
"""
from __future__ import annotations

import numpy as np

from qcool import epsilon_min, make_scenario

base = make_scenario(delta21=0.3, epsilon=0.0, t_h=0.2, t_c=0.1, t_e=0.2)
print(" T_e    lambda_e   eps_min      flow form")
for coupling_e in (1e-3, 1e-2):
    for t_e in np.linspace(0.1, 0.3, 5):
        s = base.with_bath("env", temperature=float(t_e), coupling=coupling_e)
        e = epsilon_min(s)
        print(f" {t_e:.2f}   {coupling_e:<8g}   {e.numeric:.6e} {e.flow_form:.6e}")
