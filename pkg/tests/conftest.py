import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from chiralfiber.coupling import AtomSpec  # noqa: E402
from chiralfiber.guided import FiberSpec, omega_from_wavelength, solve_mode  # noqa: E402

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

A_NM = 250.0
LAMBDA_NM = 852.0

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def fiber():
    return FiberSpec(A_NM * 1e-9, 1.45, 1.0)


@pytest.fixture(scope="session")
def omega0():
    return omega_from_wavelength(LAMBDA_NM * 1e-9)


@pytest.fixture(scope="session")
def mode(fiber, omega0):
    return solve_mode(fiber, omega0)


@pytest.fixture(scope="session")
def surface_atom(fiber):
    return AtomSpec(fiber.a)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def record_criterion():
    def record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}: {detail}")
