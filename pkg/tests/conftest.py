import numpy as np
import pytest

from fracwill.profile import cosine, quartic, solve_profile

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def profiles():
    """Solved layers keyed by (s, potential name), computed on first use."""
    cache = {}

    def get(s, potential="quartic"):
        key = (s, potential)
        if key not in cache:
            pot = quartic() if potential == "quartic" else cosine()
            cache[key] = solve_profile(pot, s, 40.0, 4096, 1e-8)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def limsup_reports(profiles):
    """s = 0.8 experiment reports on circles, keyed by radius."""
    from fracwill.experiment import EnergyConfig, run_limsup_experiment
    from fracwill.geometry import PlanarCurve

    cache = {}

    def get(R):
        if R not in cache:
            cache[R] = run_limsup_experiment(EnergyConfig(0.8), PlanarCurve.circle(R), profiles(0.8))
        return cache[R]

    return get
