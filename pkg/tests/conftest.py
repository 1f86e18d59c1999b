import numpy as np
import pytest

from lambheat import BathSpec, SystemParams, eigensystem


@pytest.fixture
def eig():
    return eigensystem(SystemParams(3.0, 2.0, 0.5))


@pytest.fixture
def fig2_bath():
    return BathSpec(1.0, 0.01, 50.0)


@pytest.fixture
def blue_baths():
    # two-qubit parameters (3, 2, 0.5), T1 = 1, T2 = 11
    return BathSpec(1.0, 0.01, 50.0), BathSpec(11.0, 0.01, 50.0)


def assert_rel(got, want, tol):
    got, want = np.asarray(got, float), np.asarray(want, float)
    err = np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300))
    assert err < tol, f"relative error {err:.3e} >= {tol:g}: got {got}, want {want}"


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
