"""Plot-ready datasets for the standard chiller studies (``fig2`` .. ``fig7``).

Each study has fixed bath temperatures, couplings and drive.  The values
that select the individual curves are toolkit choices and are written to
every dataset header under ``toolkit.*``:

* fig2/fig3 environmental couplings: 0, 0.001, 0.01
* fig2 lower gap: 0.3 (fig2 scans T_e from 0.1 to 0.3)
* fig4 cold-bath temperatures: 0.005, 0.01, 0.02
* fig5/fig6 environmental coupling when attached: 0.001
* fig7 environmental temperatures: 0.25, 0.3, 0.4; drive switched off
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .analysis import (
    AnalysisError,
    CoolingWindow,
    cooling_window,
    epsilon_min,
    maximize_cooling_rate,
    approx_cooling_rate,
)
from .config import scenario_items
from .datasets import Dataset, write_dataset
from .model import Scenario, make_scenario
from .thermo import carnot_cop_absorption, carnot_cop_work, evaluate

DEFAULT_POINTS = 60

FIG23_LAMBDA_E = (0.0, 0.001, 0.01)
FIG2_DELTA21 = 0.3
FIG4_T_C = (0.005, 0.01, 0.02)
FIG56_LAMBDA_E = (0.0, 0.001)
FIG7_T_E = (0.25, 0.3, 0.4)


def window_grid(window: CoolingWindow, n: int) -> np.ndarray:
    """Points strictly inside a window, crowding towards both ends."""
    lo, hi = window.delta21_min, window.delta21_max
    width = hi - lo
    ends = [lo + width * 10.0 ** -k for k in range(3, 7)]
    ends += [hi - width * 10.0 ** -k for k in range(3, 7)]
    return np.unique(np.concatenate([np.linspace(lo, hi, n + 1)[1:-1], ends]))


def _header(ds: Dataset, figure: str, template: Scenario, **toolkit) -> None:
    ds.parameters["figure"] = figure
    for k, v in scenario_items(template):
        ds.parameters[k] = v
    for k, v in toolkit.items():
        ds.parameters[f"toolkit.{k}"] = v


def fig2(n: int) -> Dataset:
    base = make_scenario(delta21=FIG2_DELTA21, epsilon=0.0, t_h=0.2, t_c=0.1, t_e=0.2)
    ds = Dataset(["curve", "t_e", "eps_min", "eps_min_formula", "eps_min_flow_form"])
    _header(ds, "fig2", base, lambda_e=FIG23_LAMBDA_E, delta21=FIG2_DELTA21,
            t_e_range=(0.1, 0.3))
    for le in FIG23_LAMBDA_E:
        label = f"lambda_e={le:g}"
        for t_e in np.linspace(0.1, 0.3, n):
            s = base.with_bath("env", coupling=le, temperature=float(t_e))
            try:
                e = epsilon_min(s)
                ds.add(label, float(t_e), e.numeric, e.formula, e.flow_form)
            except AnalysisError:
                ds.add(label, float(t_e), None, None, None)
    return ds


def fig3(n: int) -> Dataset:
    base = make_scenario(delta21=0.1, epsilon=0.001, t_h=0.2, t_c=0.1, t_e=0.2)
    ds = Dataset(["curve", "t_c", "delta21_max"])
    _header(ds, "fig3", base, lambda_e=FIG23_LAMBDA_E, t_c_range=(0.002, 0.19))
    for le in FIG23_LAMBDA_E:
        label = f"lambda_e={le:g}"
        for t_c in np.linspace(0.002, 0.19, n):
            w = cooling_window(base.with_bath("env", coupling=le).with_bath(
                "cold", temperature=float(t_c)))
            ds.add(label, float(t_c), w.delta21_max if w.nonempty else 0.0)
    return ds


def fig4(n: int) -> Dataset:
    base = make_scenario(delta21=0.01, epsilon=0.001, t_h=0.03, t_c=0.01, t_e=0.03)
    ds = Dataset(["curve", "delta21", "qdot_c", "qdot_c_approx"])
    _header(ds, "fig4", base, t_c=FIG4_T_C, delta21_range=(0.0, 0.15))
    grid = np.linspace(0.0, 0.15, n + 1)[1:]
    locus = []
    for t_c in FIG4_T_C:
        s = base.with_bath("cold", temperature=t_c)
        label = f"t_c={t_c:g}"
        for x in grid:
            sx = s.with_delta21(float(x))
            ds.add(label, float(x), evaluate(sx).q_c, approx_cooling_rate(sx))
        opt = maximize_cooling_rate(s)
        locus.append((f"{label}/max", opt.delta21_star, opt.q_c_max,
                      approx_cooling_rate(s.with_delta21(opt.delta21_star))))
    for row in locus:
        ds.add(*row)
    return ds


def _chiller_curves(figure: str, columns: list[str], row: Callable, n: int) -> Dataset:
    base = make_scenario(delta21=0.1, epsilon=0.001, t_h=0.2, t_c=0.1, t_e=0.2)
    ds = Dataset(columns)
    _header(ds, figure, base, lambda_e=FIG56_LAMBDA_E)
    ds.summary["carnot_cop"] = carnot_cop_work(0.1, 0.2)
    for le in FIG56_LAMBDA_E:
        s = base.with_bath("env", coupling=le)
        label = f"lambda_e={le:g}"
        w = cooling_window(s)
        for x in window_grid(w, n):
            ds.add(*row(label, float(x), evaluate(s.with_delta21(float(x)))))
        ds.summary[f"delta21_max[{label}]"] = w.delta21_max
        opt = maximize_cooling_rate(s, w)
        ds.add(*row(f"{label}/max", opt.delta21_star, evaluate(s.with_delta21(opt.delta21_star))))
    return ds


def fig5(n: int) -> Dataset:
    return _chiller_curves("fig5", ["curve", "delta21", "qdot_c", "cop"],
                           lambda label, x, r: (label, x, r.q_c, r.cop_work), n)


def fig6(n: int) -> Dataset:
    return _chiller_curves("fig6", ["curve", "delta21", "entropy_rate", "qdot_c"],
                           lambda label, x, r: (label, x, r.s_dot, r.q_c), n)


def fig7(n: int) -> Dataset:
    base = make_scenario(delta21=0.1, epsilon=0.0, t_h=0.2, t_c=0.1, t_e=0.3)
    ds = Dataset(["curve", "delta21", "qdot_c", "cop"])
    _header(ds, "fig7", base, t_e=FIG7_T_E, epsilon=0.0)
    for t_e in FIG7_T_E:
        s = base.with_bath("env", temperature=t_e)
        label = f"t_e={t_e:g}"
        w = cooling_window(s)
        for x in window_grid(w, n):
            r = evaluate(s.with_delta21(float(x)))
            ds.add(label, float(x), r.q_c, r.cop_absorption)
        ds.summary[f"carnot_cop[{label}]"] = carnot_cop_absorption(0.1, 0.2, t_e)
        ds.summary[f"delta21_max[{label}]"] = w.delta21_max
    return ds


FIGURES: dict[str, Callable[[int], Dataset]] = {
    "fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5, "fig6": fig6, "fig7": fig7,
}


def run_figure(name: str, out_path=None, fmt: str = "csv", n_points: Optional[int] = None
               ) -> Dataset:
    """Build the named dataset and, if ``out_path`` is given, write it."""
    try:
        builder = FIGURES[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; expected one of {sorted(FIGURES)}") from None
    ds = builder(n_points or DEFAULT_POINTS)
    if out_path is not None:
        write_dataset(ds, out_path, fmt)
    return ds
