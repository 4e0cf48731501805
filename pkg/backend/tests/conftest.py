"""Pytest configuration and fixtures."""
import random

import pytest

from qkz_forge.field import PARAM_GENS, ParameterSet
from qkz_forge.klbasis import KLType
from qkz_forge.qkz import solve_one_boundary, solve_two_boundary


@pytest.fixture
def params():
    """Generic parameters in the standard frame."""
    return ParameterSet.generic()


@pytest.fixture
def reduced_params():
    """Generic parameters in the frame that stores s^2 and s*zeta0."""
    return ParameterSet.generic("reduced")


@pytest.fixture
def gens():
    """Generators of the parameter field by name."""
    return PARAM_GENS


@pytest.fixture
def rng():
    """Seeded random source for sample polynomials."""
    return random.Random(20240607)


@pytest.fixture(scope="session")
def two_boundary_state():
    """Solved two-boundary state at N=2, r=J=1, sign +, basis BII."""
    return solve_two_boundary(2, 1, 1, "+", KLType("BII"))


@pytest.fixture(scope="session")
def one_boundary_state():
    """Solved one-boundary state at N=2, r=1."""
    return solve_one_boundary(2, 1)


@pytest.fixture(scope="session")
def one_boundary_state_three():
    """Solved one-boundary state at N=3, r=1."""
    return solve_one_boundary(3, 1)
