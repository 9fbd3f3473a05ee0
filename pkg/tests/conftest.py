from functools import lru_cache

import numpy as np
import pytest

from qaffine.su_basis import compute_structure_constants, generate_gellmann


@lru_cache(maxsize=None)
def basis(d):
    g = generate_gellmann(d)
    return g, compute_structure_constants(g)


@pytest.fixture
def qutrit():
    return basis(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_kraus_terms(rng, d, k):
    ops = rng.normal(size=(k, d, d)) + 1j * rng.normal(size=(k, d, d))
    return rng.normal(size=k), ops


def random_unit_ball(rng, n):
    v = rng.normal(size=n)
    return v * rng.uniform() / np.linalg.norm(v)


# acceptance lines collected by test_acceptance.py, echoed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
