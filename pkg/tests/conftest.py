import numpy as np
import pytest

from arnoldi_tikhonov.problems import add_noise, phillips_galerkin, phillips_nystrom

ACCEPTANCE_LINES = []  # (criterion number, line)


@pytest.fixture(scope="session")
def nystrom_100():
    return phillips_nystrom(100)


@pytest.fixture(scope="session")
def nystrom_1000():
    return phillips_nystrom(1000)


@pytest.fixture(scope="session")
def galerkin_200():
    return phillips_galerkin(200)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def noisy(problem, nu=1e-2, seed=0):
    return add_noise(problem, nu, seed).y_delta


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
