import itertools
from fractions import Fraction as Q

import pytest

from bpb import arith


@pytest.fixture(autouse=True)
def rational_mode():
    """Every test starts in rational mode regardless of BPB_MODE."""
    with arith.use_mode("rational"):
        yield


def brute_inf_to_one(matrix, weights):
    """Independent oracle: max over all sign vectors of sum_j w_j |(M s)_j|.

    Plain enumeration of every sign vector, no symmetry or Gray-code tricks.
    """
    n = len(matrix[0])
    best = None
    for signs in itertools.product((-1, 1), repeat=n):
        value = sum(
            (Q(w) * abs(sum((Q(a) * s for a, s in zip(row, signs)), Q(0))) for w, row in zip(weights, matrix)),
            Q(0),
        )
        if best is None or value > best:
            best = value
    return best


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split("criterion ")[1]):
            terminalreporter.write_line(line)
