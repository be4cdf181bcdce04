"""Shared fixtures.

The optimized auxiliary functions are expensive to build (LP seed plus
structured re-optimization plus exact sign verification), so they are
session-scoped and shared between the module tests and the acceptance
suite.
"""

import numpy as np
import pytest

from optima.euclid_bounds import optimize_aux


@pytest.fixture(scope="session")
def aux1():
    return optimize_aux(1, 15)


@pytest.fixture(scope="session")
def aux2():
    return optimize_aux(2, 15)


@pytest.fixture(scope="session")
def aux8():
    return optimize_aux(8, 23)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260814)
