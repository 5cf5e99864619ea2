"""Command-line front end.

Usage::

    qcool steady   --config chiller.cfg [--method nullspace]
    qcool flows    --config chiller.cfg --format json --out flows.json
    qcool sweep    --config chiller.cfg --var delta21 --from 0.01 --to 0.5 --grid 100
    qcool window   --config chiller.cfg
    qcool optimize --config chiller.cfg --tol 1e-12
    qcool scaling  --config chiller.cfg [--from 1e-4 --to 1e-2 --grid 17]
    qcool evolve   --config chiller.cfg --initial excited
    qcool figure   fig5 --out fig5.csv

Datasets go to ``--out`` or standard output.  Exit status: 0 on success,
1 for usage or configuration errors, 2 for domain errors (empty window,
no convergence, ...), 3 for I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import (
    SWEEP_VARIABLES,
    AnalysisError,
    cooling_window,
    maximize_cooling_rate,
    scaling_exponent,
    sweep,
)
from .config import ScenarioConfig, parse_config, scenario_items
from .datasets import FORMATS, Dataset, render, write_dataset
from .dynamics import DensityState, IntegrationError, IntegrationSettings, evolve_to_steady, trajectory
from .figures import FIGURES, run_figure
from .model import ScenarioError, rates_for
from .steady_state import SteadyStateError, build_generator, solve_steady_state
from .thermo import ThermoReport, evaluate

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3
DEFAULT_SWEEP_POINTS = 50
DEFAULT_TRAJECTORY_POINTS = 50

REPORT_COLUMNS = ["wdot", "qdot_h", "qdot_c", "qdot_e", "entropy_rate", "cop_work", "cop_absorption"]
INITIAL_STATES = {
    "ground": DensityState.ground(),
    "excited": DensityState.excited(),
    "mixed": DensityState(1 / 3, 1 / 3, 1 / 3, 0.0, 0.0),
}

logger = logging.getLogger("qcool")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for domain errors here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _report_row(r: ThermoReport) -> list:
    return [r.w_dot, r.q_h, r.q_c, r.q_e, r.s_dot, r.cop_work, r.cop_absorption]


def _new_dataset(columns: list[str], command: str, cfg: Optional[ScenarioConfig], **extra
                 ) -> Dataset:
    ds = Dataset(columns)
    ds.parameters["command"] = command
    if cfg is not None:
        for k, v in scenario_items(cfg.scenario):
            ds.parameters[k] = v
    for k, v in extra.items():
        if v is not None:
            ds.parameters[k] = v
    return ds


def _grid(args, cfg: ScenarioConfig, default: int) -> int:
    n = args.grid if args.grid is not None else cfg.grid
    return n if n is not None else default


def _tol(args, cfg: ScenarioConfig) -> Optional[float]:
    return args.tol if args.tol is not None else cfg.tol


def cmd_steady(args, cfg: ScenarioConfig) -> Dataset:
    s = cfg.scenario
    ss = solve_steady_state(rates_for(s), args.method)
    ds = _new_dataset(["delta21", "p11", "p22", "p33", "re_p32", "im_p32"], "steady", cfg,
                      method=args.method)
    ds.add(s.levels.delta21, ss.p11, ss.p22, ss.p33, ss.p32.real, ss.p32.imag)
    return ds


def cmd_flows(args, cfg: ScenarioConfig) -> Dataset:
    s = cfg.scenario
    r = evaluate(s, args.method)
    ds = _new_dataset(["delta21", *REPORT_COLUMNS], "flows", cfg, method=args.method)
    ds.add(s.levels.delta21, *_report_row(r))
    ds.summary["first_law_residual"] = r.first_law_residual
    ds.summary["flow_scale"] = r.scale
    return ds


def cmd_sweep(args, cfg: ScenarioConfig) -> Dataset:
    if args.var is None or args.lo is None or args.hi is None:
        raise UsageError("sweep needs --var, --from and --to")
    n = _grid(args, cfg, DEFAULT_SWEEP_POINTS)
    grid = np.linspace(args.lo, args.hi, n)
    result = sweep(cfg.scenario, args.var, grid, workers=args.workers)
    ds = _new_dataset([args.var, *REPORT_COLUMNS], "sweep", cfg, var=args.var,
                      **{"from": args.lo, "to": args.hi, "grid": n})
    failed = 0
    for x, r, err in zip(result.grid, result.reports, result.errors):
        if r is None:
            failed += 1
            logger.warning("%s=%r: %s", args.var, x, err)
            ds.add(x, *[None] * len(REPORT_COLUMNS))
        else:
            ds.add(x, *_report_row(r))
    ds.summary["failed_points"] = failed
    return ds


def cmd_window(args, cfg: ScenarioConfig) -> Dataset:
    w = cooling_window(cfg.scenario)
    if not w.nonempty:
        raise AnalysisError("cooling window is empty for this scenario")
    ds = _new_dataset(["delta21_min", "delta21_max", "width"], "window", cfg)
    ds.add(w.delta21_min, w.delta21_max, w.width)
    return ds


def cmd_optimize(args, cfg: ScenarioConfig) -> Dataset:
    tol = _tol(args, cfg)
    opt = maximize_cooling_rate(cfg.scenario, xtol=tol if tol is not None else 1e-12)
    r = evaluate(cfg.scenario.with_delta21(opt.delta21_star))
    ds = _new_dataset(["delta21", *REPORT_COLUMNS], "optimize", cfg, tol=tol)
    ds.add(opt.delta21_star, *_report_row(r))
    ds.summary["delta21_min"] = opt.window.delta21_min
    ds.summary["delta21_max"] = opt.window.delta21_max
    return ds


def cmd_scaling(args, cfg: ScenarioConfig) -> Dataset:
    d31 = cfg.scenario.levels.delta31
    lo = args.lo if args.lo is not None else 1e-4 * d31
    hi = args.hi if args.hi is not None else 1e-2 * d31
    n = _grid(args, cfg, 17)
    fit = scaling_exponent(cfg.scenario, np.geomspace(lo, hi, n))
    ds = _new_dataset(["t_c", "qdot_c", "delta21"], "scaling", cfg,
                      **{"from": lo, "to": hi, "grid": n})
    for t, q, d in zip(fit.t_c, fit.q_c_max, fit.delta21_star):
        ds.add(float(t), float(q), float(d))
    ds.summary["alpha"] = fit.alpha
    ds.summary["intercept"] = fit.intercept
    ds.summary["r_squared"] = fit.r_squared
    return ds


def cmd_evolve(args, cfg: ScenarioConfig) -> Dataset:
    rates = rates_for(cfg.scenario)
    G = build_generator(rates)
    state0 = INITIAL_STATES[args.initial]
    tol = _tol(args, cfg)
    settings = IntegrationSettings(steady_tol=tol) if tol is not None else IntegrationSettings()
    final, elapsed, residual = evolve_to_steady(G, state0, settings)
    n = _grid(args, cfg, DEFAULT_TRAJECTORY_POINTS)
    times = np.linspace(0.0, elapsed, n) if elapsed > 0 else np.zeros(1)
    states = trajectory(G, state0, times) if elapsed > 0 else [state0]
    ds = _new_dataset(["time", "p11", "p22", "p33", "re_p32", "im_p32", "trace"], "evolve", cfg,
                      initial=args.initial, steady_tol=settings.steady_tol)
    for st in states:
        ds.add(st.time, st.rho11, st.rho22, st.rho33, st.re_coh, st.im_coh, st.trace)
    ref = solve_steady_state(rates).as_vector()
    ds.summary["elapsed"] = elapsed
    ds.summary["residual"] = residual
    ds.summary["max_deviation"] = float(np.abs(final.as_vector() - ref).max())
    return ds


COMMANDS = {
    "steady": cmd_steady,
    "flows": cmd_flows,
    "sweep": cmd_sweep,
    "window": cmd_window,
    "optimize": cmd_optimize,
    "scaling": cmd_scaling,
    "evolve": cmd_evolve,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the dataset here (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--grid", type=int, metavar="N", help="number of grid points")
    common.add_argument("-v", "--verbose", action="store_true")

    scen = _Parser(add_help=False, parents=[common])
    scen.add_argument("--config", metavar="PATH", required=True)
    scen.add_argument("--tol", type=float, metavar="X")

    p = _Parser(prog="qcool", description="Three-level quantum refrigerator toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("steady", "flows"):
        sp = sub.add_parser(name, parents=[scen])
        sp.add_argument("--method", choices=("closed_form", "nullspace"), default="closed_form")
    sp = sub.add_parser("sweep", parents=[scen])
    sp.add_argument("--var", choices=SWEEP_VARIABLES)
    sp.add_argument("--from", dest="lo", type=float, metavar="A")
    sp.add_argument("--to", dest="hi", type=float, metavar="B")
    sp.add_argument("--workers", type=int, default=None)
    sub.add_parser("window", parents=[scen])
    sub.add_parser("optimize", parents=[scen])
    sp = sub.add_parser("scaling", parents=[scen], help="fit q_c_max ~ T_c**alpha")
    sp.add_argument("--from", dest="lo", type=float, metavar="A", help="lowest T_c")
    sp.add_argument("--to", dest="hi", type=float, metavar="B", help="highest T_c")
    sp = sub.add_parser("evolve", parents=[scen])
    sp.add_argument("--initial", choices=sorted(INITIAL_STATES), default="ground")
    sp = sub.add_parser("figure", parents=[common])
    sp.add_argument("name", choices=sorted(FIGURES))
    return p


def _emit(ds: Dataset, args) -> None:
    if args.out:
        write_dataset(ds, args.out, args.format)
    else:
        sys.stdout.write(render(ds, args.format))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.grid is not None and args.grid < 2:
        print("qcool: --grid must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "figure":
            ds = run_figure(args.name, n_points=args.grid)
        else:
            cfg = parse_config(args.config)
            ds = COMMANDS[args.command](args, cfg)
        _emit(ds, args)
    except UsageError as exc:
        print(f"qcool {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qcool {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScenarioError, ValueError) as exc:
        print(f"qcool {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AnalysisError, SteadyStateError, IntegrationError, ArithmeticError) as exc:
        print(f"qcool {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
