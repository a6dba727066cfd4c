"""
Shared fixtures: the hand-checkable states and potentials of the test suite.

- tent: psi = 1 - |x| on [-1, 1], the zero-energy state of a single
  tuned spike c = -2 at the origin
- m_state: the M-shaped state behind three spikes at -1/3, 1/3 and 2/3
- generated_problems: a deterministic batch of random worksheet problems
"""

import logging

import pytest

from qm_jeopardy.model import (
    DeltaPotential,
    PiecewiseLinearState,
    make_potential,
    make_state,
)
from qm_jeopardy.probgen import Problem, generate

PROPERTY_CASES = 1000


@pytest.fixture(autouse=True)
def restore_logging():
    """Undo handler changes made by setup_logging (the CLI calls it on every run)."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def tent() -> PiecewiseLinearState:
    return make_state([(-1, 0), (0, 1), (1, 0)])


@pytest.fixture
def m_state() -> PiecewiseLinearState:
    return make_state([(-1, 0), ("-1/3", "2/3"), ("1/3", "1/3"), ("2/3", "2/3"), (1, 0)])


@pytest.fixture
def v2() -> DeltaPotential:
    return make_potential([("-1/3", "-9/4"), ("1/3", "9/2"), ("2/3", "-9/2")])


@pytest.fixture
def tuned_spike() -> DeltaPotential:
    return make_potential([(0, -2)])


@pytest.fixture
def bare_well() -> DeltaPotential:
    return DeltaPotential()


@pytest.fixture(scope="session")
def generated_problems() -> list[Problem]:
    """Problems for seeds 0..999 cycling through 1 to 8 kinks."""
    return [generate(seed, 1 + seed % 8, 10) for seed in range(PROPERTY_CASES)]
