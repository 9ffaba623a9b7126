import numpy as np
import pytest

from opuczeros import weights as W
from opuczeros.opuc import build_basis

ACCEPTANCE_LINES = []


def _table_weight():
    theta = 2 * np.pi * np.arange(256) / 256
    return W.table(W.evaluate_weight(W.bernstein_szego(0.3), theta))


FAMILIES = {
    "uniform": (W.uniform(), 1e-13),
    "bernstein_szego": (W.bernstein_szego(0.5), 1e-13),
    "trig_poly": (W.trig_poly([2.0, 1.0]), 1e-13),
    "table": (_table_weight(), 1e-10),
}


@pytest.fixture(scope="session")
def make_basis():
    cache = {}

    def make(name, N):
        key = (name, N)
        if key not in cache:
            spec, tol = FAMILIES[name]
            cache[key] = build_basis(W.compute_moments(spec, N, tol))
        return cache[key]

    return make


@pytest.fixture(scope="session")
def uniform_basis(make_basis):
    return make_basis("uniform", 45)


@pytest.fixture(scope="session")
def bs_basis(make_basis):
    return make_basis("bernstein_szego", 45)


def random_points(rng, count, inner=(0.05, 0.95), outer=(1.05, 5.0)):
    half = count // 2
    r = np.concatenate([rng.uniform(*inner, half), rng.uniform(*outer, count - half)])
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
