import math

import numpy as np
import pytest
from hypothesis import settings

from ggdiscord.gaussian_core import StandardForm, local_transform, omega, rotation, squeezer, validate_physical
from ggdiscord.families import sts_c_max

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def random_local_symplectic(rng):
    """Rotation-squeeze-rotation on one mode (a generic Sp(2, R) element)."""
    return rotation(rng.uniform(0, 2 * math.pi)) @ squeezer(rng.normal(0, 0.7)) @ rotation(
        rng.uniform(0, 2 * math.pi)
    )


def random_beam_splitter(rng):
    t = rng.uniform(0, math.pi / 2)
    co, si = math.cos(t), math.sin(t)
    return np.block([[co * np.eye(2), si * np.eye(2)], [-si * np.eye(2), co * np.eye(2)]])


def williamson_matrix(rng, nu1, nu2):
    """S diag(nu1, nu1, nu2, nu2) S^T for a random two-mode symplectic S."""
    s = np.zeros((4, 4))
    s[:2, :2] = random_local_symplectic(rng)
    s[2:, 2:] = random_local_symplectic(rng)
    s = s @ random_beam_splitter(rng)
    s2 = np.zeros((4, 4))
    s2[:2, :2] = random_local_symplectic(rng)
    s2[2:, 2:] = random_local_symplectic(rng)
    s = s2 @ s
    out = s @ np.diag([nu1, nu1, nu2, nu2]) @ s.T
    return 0.5 * (out + out.T)


def eigensolve_physical(sigma, tol=1e-10):
    """Physicality oracle: sigma + i Omega >= 0 via a Hermitian eigensolve."""
    return np.linalg.eigvalsh(sigma + 1j * omega(2)).min() >= -tol


def random_symmetric(rng):
    """Mix of Williamson-built, standard-form and generic symmetric matrices,
    physical and unphysical."""
    kind = rng.integers(3)
    if kind == 0:
        nu1, nu2 = rng.uniform(0.5, 3.0, 2)
        return williamson_matrix(rng, nu1, nu2)
    if kind == 1:
        sf = StandardForm(*rng.uniform(0.5, 6.0, 2), *rng.uniform(-6.0, 6.0, 2))
        return sf.matrix()
    a = rng.normal(size=(4, 4))
    return a + a.T + rng.uniform(0, 4) * np.eye(4)


def random_physical_sf(rng, hi=20.0):
    while True:
        a, b = rng.uniform(1, hi, 2)
        c = rng.uniform(0, math.sqrt(a * b - 1))
        d = rng.uniform(-c, c)
        sf = StandardForm(a, b, c, d)
        if validate_physical(sf).valid:
            return sf


def random_sts_sf(rng, hi=25.0):
    a, b = rng.uniform(1, hi, 2)
    c = rng.uniform(0, sts_c_max(a, b))
    return StandardForm(a, b, c, -c)


def locally_rotated(sf, rng):
    return local_transform(sf, random_local_symplectic(rng), random_local_symplectic(rng))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# -- acceptance report -----------------------------------------------------------

ACCEPTANCE_CRITERIA = 10
_acceptance = {}


def record_acceptance(number: int, ok: bool, detail: str):
    """Store one criterion's outcome; printed in the terminal summary."""
    line = f"AC{number}: {'PASS' if ok else 'FAIL'}  {detail}"
    _acceptance[number] = line
    print(line)
    return ok


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is not None and report.failed and number not in _acceptance:
        _acceptance[number] = f"AC{number}: FAIL  (errored during {report.when})"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, ACCEPTANCE_CRITERIA + 1):
        terminalreporter.write_line(_acceptance.get(number, f"AC{number}: NOT RUN"))
