from __future__ import annotations

import numpy as np
import pytest

from qcool.model import BathSpec, DriveSpec, LevelStructure, Scenario, make_scenario

ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def random_scenario(rng: np.random.Generator) -> Scenario:
    """Couplings and drive log-uniform in [1e-5, 1e-1], temperatures in [1e-3, 1]."""
    lam = 10.0 ** rng.uniform(-5, -1, 4)
    temps = 10.0 ** rng.uniform(-3, 0, 3)
    d21 = rng.uniform(0.01, 0.99)
    baths = {}
    for i, label in enumerate(("hot", "cold", "env")):
        if rng.random() < 0.5:
            baths[label] = BathSpec(label, float(temps[i]), float(lam[i]))
        else:
            baths[label] = BathSpec(label, float(temps[i]), float(lam[i]), "power_law",
                                    float(rng.uniform(0.5, 3.0)))
    return Scenario(LevelStructure(1.0, float(d21)), DriveSpec(float(lam[3])), **baths)


def random_scenarios(n: int, seed: int = 0) -> list[Scenario]:
    rng = np.random.default_rng(seed)
    return [random_scenario(rng) for _ in range(n)]


def componentwise_rel(a, b) -> float:
    """Largest relative difference over (p11, p22, p33, Im p32); Re p32 compared absolutely."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    idx = [0, 1, 2, 4]
    rel = np.abs(a[idx] - b[idx]) / np.maximum(np.abs(b[idx]), 1e-300)
    return float(max(rel.max(), abs(a[3] - b[3])))


@pytest.fixture
def chiller() -> Scenario:
    """T_c=0.1, T_h=T_e=0.2, all couplings and drive 1e-3, power-law cold bath (s=1), gap 0.3."""
    return make_scenario(delta21=0.3, epsilon=1e-3, t_h=0.2, t_c=0.1, t_e=0.2)


@pytest.fixture
def cold_chiller() -> Scenario:
    """T_h=T_e=0.03 with all couplings and drive 1e-3, power-law cold bath (s=1)."""
    return make_scenario(delta21=0.01, epsilon=1e-3, t_h=0.03, t_c=0.005, t_e=0.03)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}")
