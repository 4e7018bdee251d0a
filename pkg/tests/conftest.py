"""Shared fixtures; the closed-loop runs are slow, so each is simulated once per session."""

import time

import pytest
from hypothesis import HealthCheck, settings

from missile_smc.harness.metrics import compute_metrics
from missile_smc.harness.scenario import Scenario
from missile_smc.harness.simulation import resolve_tables, run_simulation

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def default_scenario():
    return Scenario()


@pytest.fixture(scope="session")
def default_tables(default_scenario):
    return resolve_tables(default_scenario)


@pytest.fixture(scope="session")
def default_run(default_scenario, default_tables):
    """Ideal (noise-free) st_exp run of the default scenario: ``(trajectory, metrics)``.

    The wall-clock time of the run is kept in ``trajectory.info["wall_time"]``.
    """
    start = time.perf_counter()
    traj = run_simulation(default_scenario, tables=default_tables)
    traj.info["wall_time"] = time.perf_counter() - start
    return traj, compute_metrics(traj, default_scenario)


@pytest.fixture(scope="session")
def default_run_fine(default_scenario, default_tables):
    """Same run recorded at every integration step (reaching-time and limit checks)."""
    from dataclasses import replace

    sc = replace(default_scenario, output_decimation=1)
    traj = run_simulation(sc, tables=default_tables)
    return sc, traj


@pytest.fixture(scope="session")
def default_comparison(default_scenario, default_tables):
    """All four single-surface laws on the default ideal scenario, least chattering first."""
    from missile_smc.harness.compare import compare_reaching_laws

    return compare_reaching_laws(default_scenario, ["st_exp", "tanh", "power", "sgn"],
                                 tables=default_tables)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
