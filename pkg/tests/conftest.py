import itertools
from fractions import Fraction

import numpy as np
import pytest

from deltasr.tree import eval_complete

ACCEPTANCE_LINES = []


def definition_agreement(tree, x, s):
    """Fraction of z in {0,1}^n agreeing with x on s and with T(z) = T(x)."""
    n = tree.num_vars
    target = eval_complete(tree, x)
    hits = total = 0
    for z in itertools.product((0, 1), repeat=n):
        if any(z[i] != x[i] for i in s):
            continue
        total += 1
        hits += eval_complete(tree, z) == target
    return Fraction(hits, total)


def definition_partial_value(tree, y):
    """T(y) counted over all of {0,1}^n, keeping the consistent ones."""
    hits = total = 0
    for z in itertools.product((0, 1), repeat=tree.num_vars):
        if all(b is None or b == a for a, b in zip(z, y)):
            total += 1
            hits += eval_complete(tree, z)
    return Fraction(hits, total)


def lc_rule(bits, z):
    zeros = sum(1 for b in bits if b == 0)
    return int(zeros == 1 or (zeros == 0 and z == 0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
