import math

import numpy as np
import pytest

from biasdyn import Harmonic, Trajectory, make_grid, sample_input

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _acceptance.append((marker.args[0], marker.args[1], item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, name, outcome in sorted(_acceptance):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"AC{number} {status}  {title}  [{name}]")


def operand_scale(y_now, y_next, dt, eps):
    """Magnitude of the terms entering one biased difference; one ulp of it
    bounds the rounding of the formula."""
    return (np.abs(y_next) + np.abs(y_now)) / dt + np.abs(eps * y_now)


@pytest.fixture
def carrier():
    """cos(t/2) sampled at dt=1e-3 over a little more than one period."""
    grid = make_grid(0.0, 1e-3, math.ceil(4 * math.pi / 1e-3) + 2)
    return sample_input(Harmonic(1.0, 0.5, 0.0), grid).rename("y")


def series(values, dt=1.0, t0=0.0, name="y"):
    values = np.asarray(values, dtype=float)
    return Trajectory(make_grid(t0, dt, values.size), (name,), values)
