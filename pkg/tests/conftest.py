import itertools
import math

import hypothesis
import pytest

from isodil.matrix2 import IntMatrix2, is_rotational
from isodil.refine import Mask

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("ci")

QUINCUNX = IntMatrix2(1, -1, 1, 1)
EXAMPLE2 = IntMatrix2(0, -2, 1, 1)
QUARTER_TURN = IntMatrix2(0, -1, 1, 0)


def rotational_population(bound=3):
    return [
        M
        for M in (IntMatrix2(*e) for e in itertools.product(range(-bound, bound + 1), repeat=4))
        if is_rotational(M)
    ]


@pytest.fixture(scope="session")
def population():
    return rotational_population(3)


@pytest.fixture(scope="session")
def haar2():
    r = math.sqrt(2) / 2
    return Mask({(0, 0): r, (1, 0): r}, 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
