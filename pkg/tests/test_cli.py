from __future__ import annotations

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcool.cli import main
from qcool.config import ConfigError, ScenarioConfig, format_config, parse_config_text
from qcool.datasets import Dataset, format_value, read_csv, render, to_json
from qcool.figures import run_figure
from qcool.model import BathSpec, DriveSpec, LevelStructure, Scenario

ABSORPTION_CHILLER = """\
# driven chiller with a hot environmental bath
levels.delta31 = 1
levels.delta21 = 0.2
drive.epsilon = 0.001
bath.hot.temperature = 0.2
bath.hot.coupling = 0.001
bath.cold.model = power_law
bath.cold.temperature = 0.1
bath.cold.coupling = 0.001
bath.cold.exponent = 1
bath.env.temperature = 0.3
bath.env.coupling = 0.001
"""

GIBBS = """\
levels.delta31 = 1.0
levels.delta21 = 0.5
drive.epsilon = 0
bath.hot.temperature = 0.2
bath.hot.coupling = 0.001
bath.cold.temperature = 0.2
bath.cold.coupling = 0.001
bath.env.temperature = 0.2
bath.env.coupling = 0.001
"""


@pytest.fixture
def chiller_cfg(tmp_path):
    p = tmp_path / "chiller.cfg"
    p.write_text(ABSORPTION_CHILLER.replace("0.3\n", "0.2\n").replace("delta21 = 0.2", "delta21 = 0.3"))
    return p


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


# --- configuration files -------------------------------------------------

def test_config_accepted_and_echoed_canonically():
    cfg = parse_config_text(ABSORPTION_CHILLER, "abs.cfg")
    s = cfg.scenario
    assert s.temperatures == (0.2, 0.1, 0.3)
    assert (s.cold.model, s.cold.exponent, s.env.model) == ("power_law", 1.0, "white")
    text = format_config(cfg)
    assert "bath.env.model = white" in text
    assert parse_config_text(text) == cfg


temperature = st.floats(1e-3, 10.0)
coupling = st.floats(1e-6, 1.0)


@st.composite
def configs(draw):
    def bath(label):
        if draw(st.booleans()):
            return BathSpec(label, draw(temperature), draw(coupling), "power_law", draw(st.floats(0.1, 4)))
        return BathSpec(label, draw(temperature), draw(coupling))
    d31 = draw(st.floats(0.1, 10.0))
    s = Scenario(LevelStructure(d31, d31 * draw(st.floats(0.01, 0.99))),
                 DriveSpec(draw(st.floats(0.0, 1.0))), bath("hot"), bath("cold"), bath("env"))
    return ScenarioConfig(s, draw(st.one_of(st.none(), st.integers(2, 1000))),
                          draw(st.one_of(st.none(), st.floats(1e-15, 1.0))))


@settings(max_examples=100)
@given(configs())
def test_config_round_trip(cfg):
    assert parse_config_text(format_config(cfg)) == cfg


@pytest.mark.parametrize("text, match", [
    (ABSORPTION_CHILLER.replace("bath.cold.exponent", "bath.cold.exponnet"), "bath.cold.exponnet"),
    (ABSORPTION_CHILLER + "drive.epsilon = 0.1\n", "duplicate key 'drive.epsilon'"),
    (ABSORPTION_CHILLER.replace("levels.delta21 = 0.2\n", ""), "missing required key.*levels.delta21"),
    (ABSORPTION_CHILLER.replace("= 0.3", "= hot"), r"x.cfg:11: bath.env.temperature: expected a number"),
    (ABSORPTION_CHILLER.replace("bath.cold.temperature = 0.1", "bath.cold.temperature = 0"),
     "bath.cold.temperature: temperature must be positive"),
    (ABSORPTION_CHILLER + "just some words\n", "x.cfg:13: expected 'key = value'"),
    (ABSORPTION_CHILLER + "analysis.grid = 2.5\n", "analysis.grid"),
])
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config_text(text, "x.cfg")


# --- datasets ------------------------------------------------------------

def test_value_formatting():
    assert format_value(0.1) == "1.00000000000e-01"
    assert format_value(None) == "" and format_value(math.nan) == ""
    assert format_value(3) == "3" and format_value("x") == "x"


def test_csv_and_json_hold_the_same_numbers():
    ds = Dataset(["curve", "delta21", "cop_work"], parameters={"drive.epsilon": 0.001})
    ds.add("a", 0.123456789012345678, None)
    ds.add("a", 2.0 / 3.0, 1e-300)
    header, cols, rows = read_csv(render(ds, "csv"))
    doc = json.loads(to_json(ds))
    assert header["drive.epsilon"] == "0.001"
    assert cols == doc["columns"]
    for crow, jrow in zip(rows, doc["rows"]):
        for c, j in zip(crow, jrow):
            assert (c == "" and j is None) or c == j or float(c) == j
    with pytest.raises(ValueError):
        ds.add(1.0)
    with pytest.raises(ValueError):
        render(ds, "xml")


# --- figures -------------------------------------------------------------

def _curves(ds, value):
    i = ds.columns.index(value)
    out = {}
    for label, rows in itertools.groupby(ds.rows, key=lambda r: r[0]):
        out[label] = [r for r in rows]
    return {k: (np.array([r[1] for r in v], dtype=float),
                np.array([np.nan if r[i] is None else r[i] for r in v], dtype=float))
            for k, v in out.items()}


def test_fig2_minimum_drive_falls_with_env_temperature():
    ds = run_figure("fig2", n_points=15)
    assert ds.parameters["toolkit.lambda_e"] == (0.0, 0.001, 0.01)
    for label, (t_e, eps) in _curves(ds, "eps_min").items():
        assert len(t_e) == 15
        assert np.all(np.diff(eps) <= 0), label


def test_fig3_window_closes_as_cold_bath_cools():
    ds = run_figure("fig3", n_points=12)
    for label, (t_c, top) in _curves(ds, "delta21_max").items():
        assert top[0] < 0.02 and np.all(np.diff(top) > 0), label


def test_fig4_columns_and_locus():
    ds = run_figure("fig4", n_points=30)
    assert ds.columns == ["curve", "delta21", "qdot_c", "qdot_c_approx"]
    assert ds.parameters["toolkit.t_c"] == (0.005, 0.01, 0.02)
    loci = [r for r in ds.rows if r[0].endswith("/max")]
    assert [r[0] for r in loci] == ["t_c=0.005/max", "t_c=0.01/max", "t_c=0.02/max"]
    assert all(r[3] is not None for r in ds.rows)


def test_fig5_reaches_carnot_without_env_bath():
    ds = run_figure("fig5")
    assert ds.columns == ["curve", "delta21", "qdot_c", "cop"]
    curves = _curves(ds, "cop")
    assert np.nanmax(curves["lambda_e=0"][1]) >= 0.99 * ds.summary["carnot_cop"]
    assert np.nanmax(curves["lambda_e=0.001"][1]) < 0.5


def test_fig6_and_fig7_shapes():
    ds = run_figure("fig6", n_points=20)
    assert ds.columns == ["curve", "delta21", "entropy_rate", "qdot_c"]
    assert ds.summary["delta21_max[lambda_e=0.001]"] < ds.summary["delta21_max[lambda_e=0]"]
    assert min(r[2] for r in ds.rows) >= 0
    ds = run_figure("fig7", n_points=20)
    for label, (_, cop) in _curves(ds, "cop").items():
        assert np.nanmax(cop) <= ds.summary[f"carnot_cop[{label}]"] + 1e-9


def test_unknown_figure():
    with pytest.raises(ValueError):
        run_figure("fig9")


# --- command line --------------------------------------------------------

def test_steady_prints_gibbs_populations(tmp_path, capsys):
    cfg = tmp_path / "gibbs.cfg"
    cfg.write_text(GIBBS)
    for method in ("closed_form", "nullspace"):
        code, out, _ = run(["steady", "--config", cfg, "--method", method], capsys)
        assert code == 0
        _, cols, rows = read_csv(out)
        vals = dict(zip(cols, rows[0]))
        assert [round(float(vals[k]), 6) for k in ("p11", "p22", "p33")] == [0.918423, 0.075389, 0.006188]


def test_flows_first_law_in_emitted_digits(chiller_cfg, capsys):
    code, out, _ = run(["flows", "--config", chiller_cfg], capsys)
    assert code == 0
    _, cols, rows = read_csv(out)
    v = dict(zip(cols, rows[0]))
    assert cols[:5] == ["delta21", "wdot", "qdot_h", "qdot_c", "qdot_e"]
    parts = [float(v[k]) for k in ("wdot", "qdot_h", "qdot_c", "qdot_e")]
    assert abs(math.fsum(parts)) <= 1e-11 * max(map(abs, parts))
    assert v["cop_absorption"] == ""


def test_scaling_prints_alpha(tmp_path, capsys):
    cfg = tmp_path / "cold.cfg"
    cfg.write_text(GIBBS.replace("0.2\n", "0.03\n").replace("delta21 = 0.5", "delta21 = 0.01")
                   .replace("drive.epsilon = 0", "drive.epsilon = 0.001")
                   .replace("bath.cold.coupling = 0.001",
                            "bath.cold.coupling = 0.001\nbath.cold.model = power_law\nbath.cold.exponent = 1"))
    code, out, _ = run(["scaling", "--config", cfg, "--grid", 9], capsys)
    assert code == 0
    header, _, rows = read_csv(out)
    assert abs(float(header["summary.alpha"]) - 2.0) < 0.1
    assert len(rows) == 9


def test_outputs_are_deterministic_and_formats_agree(chiller_cfg, tmp_path, capsys):
    args = ["sweep", "--config", chiller_cfg, "--var", "delta21", "--from", 0.05, "--to", 0.6,
            "--grid", 12]
    paths = [tmp_path / f"{i}.csv" for i in range(2)]
    for p in paths:
        assert run(args + ["--out", p], capsys)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    jpath = tmp_path / "s.json"
    assert run(args + ["--out", jpath, "--format", "json"], capsys)[0] == 0
    header, cols, rows = read_csv(paths[0].read_text())
    doc = json.loads(jpath.read_text())
    assert header["bath.cold.model"] == "power_law" and doc["parameters"]["var"] == "delta21"
    assert cols == doc["columns"] == ["delta21", "wdot", "qdot_h", "qdot_c", "qdot_e",
                                      "entropy_rate", "cop_work", "cop_absorption"]
    for crow, jrow in zip(rows, doc["rows"]):
        assert [None if c == "" else float(c) for c in crow] == jrow


@pytest.mark.parametrize("command", ["window", "optimize", "evolve"])
def test_other_commands_succeed(chiller_cfg, capsys, command):
    code, out, err = run([command, "--config", chiller_cfg, "--format", "json"], capsys)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["parameters"]["command"] == command and doc["rows"]


def test_evolve_reaches_steady_state(chiller_cfg, capsys):
    code, out, _ = run(["evolve", "--config", chiller_cfg, "--initial", "excited", "--grid", 5], capsys)
    header, cols, rows = read_csv(out)
    assert code == 0 and len(rows) == 5
    assert float(header["summary.max_deviation"]) < 1e-8
    assert all(abs(float(r[cols.index("trace")]) - 1) < 1e-10 for r in rows)


def test_figure_command_writes_file(tmp_path, capsys):
    out = tmp_path / "fig7.csv"
    assert run(["figure", "fig7", "--out", out, "--grid", 5], capsys)[0] == 0
    header, cols, _ = read_csv(out.read_text())
    assert header["toolkit.t_e"] == "0.25, 0.3, 0.4"
    assert cols == ["curve", "delta21", "qdot_c", "cop"]


def test_exit_codes(chiller_cfg, tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(ABSORPTION_CHILLER.replace("bath.cold.exponent", "bath.cold.exponnet"))
    undriven = tmp_path / "undriven.cfg"
    undriven.write_text(chiller_cfg.read_text().replace("drive.epsilon = 0.001", "drive.epsilon = 0"))
    code, _, err = run(["steady", "--config", bad], capsys)
    assert code == 1 and "exponnet" in err and "bad.cfg:10" in err
    assert run(["sweep", "--config", chiller_cfg], capsys)[0] == 1
    assert run(["nonsense"], capsys)[0] == 1
    assert run(["flows"], capsys)[0] == 1
    code, _, err = run(["window", "--config", undriven], capsys)
    assert code == 2 and "empty" in err
    assert run(["steady", "--config", tmp_path / "missing.cfg"], capsys)[0] == 3
    code, _, err = run(["figure", "fig5", "--out", tmp_path / "no" / "dir.csv"], capsys)
    assert code == 3 and "dir.csv" in err
