"""Shared fixtures: a mid-size factor table and the two workhorse slopes."""
import pytest

from beattysieve.arith import FactorTable
from beattysieve.beatty import BeattyParams


@pytest.fixture(scope="session")
def table():
    return FactorTable(200_000)


@pytest.fixture(scope="session")
def sqrt2():
    # alpha = sqrt(2), beta = 0
    return BeattyParams.quadratic(0, 1, 2)


@pytest.fixture(scope="session")
def golden():
    # alpha = (1 + sqrt(5)) / 2
    return BeattyParams.quadratic(1, 1, 5, 2)
