import math

import numpy as np
import pytest

from orthentropy import kernels

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []

SQRT_HALF = 1 / math.sqrt(2)


def maximum_3():
    """-1/3 on the diagonal, 2/3 elsewhere."""
    return np.array([[-1.0, 2.0, 2.0], [2.0, -1.0, 2.0], [2.0, 2.0, -1.0]]) / 3.0


def saddle_3():
    return np.array(
        [
            [0.5, SQRT_HALF, 0.5],
            [SQRT_HALF, 0.0, -SQRT_HALF],
            [0.5, -SQRT_HALF, 0.5],
        ]
    )


@pytest.fixture
def m4():
    return maximum_3()


@pytest.fixture
def m6():
    return saddle_3()


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.BACKEND
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


def random_signed_permutation(n, rng):
    p = np.zeros((n, n))
    p[np.arange(n), rng.permutation(n)] = rng.choice([-1.0, 1.0], size=n)
    return p


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
