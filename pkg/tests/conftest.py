import sys

import numpy as np
import pytest
from hypothesis import strategies as st

SQ2 = np.sqrt(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def pair_dim2():
    """The recurring worked example: e_1 and (e_1 + e_2)/sqrt(2)."""
    return np.array([1.0, 0.0], dtype=complex), np.array([SQ2, SQ2], dtype=complex)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def vectors(dim):
    return st.lists(complexes, min_size=dim, max_size=dim).map(lambda v: np.array(v, dtype=complex))


def nonzero_vectors(dim):
    return vectors(dim).filter(lambda v: np.linalg.norm(v) > 1e-3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
