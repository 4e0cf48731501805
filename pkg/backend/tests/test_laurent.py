"""Tests for sparse Laurent polynomials and the Koornwinder order."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from qkz_forge.errors import AmbiguousLeading, NonPolynomialResult, UsageError
from qkz_forge.field import PARAM_GENS, power
from qkz_forge.laurent import (
    GREATER,
    INCOMPARABLE,
    LESS,
    LaurentPoly,
    compare,
    dominant,
    linear_combination,
    random_laurent,
)

q, S = PARAM_GENS["q"], PARAM_GENS["s"] ** 2


def z(n, i):
    return LaurentPoly.variable(n, i)


def test_product_of_binomials():
    """Test multiplication with cancellation."""
    one = LaurentPoly.one(2)
    assert (z(2, 1) + one) * (z(2, 1) - one) == z(2, 1) * z(2, 1) - one


def test_zero_polynomial_is_falsy():
    """Test that cancelled terms are dropped."""
    f = z(2, 1) - z(2, 1)
    assert not f
    assert f == 0
    assert len(f) == 0


def test_mismatched_exponent_length():
    """Test that exponents must match the number of variables."""
    with pytest.raises(UsageError):
        LaurentPoly(2, {(1, 0, 0): q})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**16), st.integers(0, 3))
def test_weyl_substitute_is_involution(seed, i):
    """Test that every s_i squares to the identity on polynomials."""
    f = random_laurent(3, random.Random(seed))
    assert f.weyl_substitute(i, S).weyl_substitute(i, S) == f


def test_weyl_substitute_s0():
    """Test z1 -> s^2 / z1."""
    f = z(2, 1) + z(2, 2)
    image = f.weyl_substitute(0, S)
    assert image == LaurentPoly.monomial((-1, 0), S) + z(2, 2)


def test_weyl_substitute_index_out_of_range():
    """Test that generators run from 0 to N."""
    with pytest.raises(UsageError):
        z(2, 1).weyl_substitute(3, S)


def test_monomial_substitute_vanishing_line():
    """Test that z2 - q^2 z1 vanishes on z2 = q^2 z1."""
    f = z(2, 2) - z(2, 1).scale(q * q)
    assert not f.monomial_substitute(2, q * q, (1, 0))


def test_monomial_substitute_inverse_line():
    """Test q z1 z2 - 1/q on z2 = q^-2 / z1."""
    f = (z(2, 1) * z(2, 2)).scale(q) - LaurentPoly.one(2).scale(1 / q)
    assert not f.monomial_substitute(2, power(q, -2), (-1, 0))


def test_extract_and_leading_term():
    """Test coefficient extraction and the leading term."""
    f = z(2, 1) * z(2, 1) + (z(2, 1) * z(2, 2)).scale(q)
    assert f.extract((1, 1)) == q
    assert f.extract((0, 0)) == 0
    assert f.leading_term() == ((2, 0), 1)


def test_leading_term_of_zero():
    """Test that the zero polynomial has no leading term."""
    with pytest.raises(AmbiguousLeading):
        LaurentPoly(2).leading_term()


def test_compare_orders():
    """Test the order on weights."""
    assert compare((1, 1), (2, 0)) == LESS
    assert compare((2, 0), (0, 2)) == GREATER
    assert compare((2, 1), (1, 2)) == GREATER
    assert compare((1, -1), (-1, 1)) in (GREATER, LESS, INCOMPARABLE)
    assert dominant((-1, 3, 0)) == (3, 1, 0)


def test_divide_binomial():
    """Test exact division by 1 - q z1."""
    g = LaurentPoly.one(2) + z(2, 2)
    f = g * (LaurentPoly.one(2) - z(2, 1).scale(q))
    assert f.divide_binomial(q, (1, 0)) == g


def test_divide_binomial_remainder():
    """Test that a non-multiple is rejected."""
    with pytest.raises(NonPolynomialResult):
        LaurentPoly.one(2).divide_binomial(q, (1, 0))


def test_field_round_trip(rng):
    """Test conversion through a single field element."""
    f = linear_combination(2, [(q, random_laurent(2, rng)), (1 / q, random_laurent(2, rng))])
    assert LaurentPoly.from_field(f.to_field(), 2) == f


def test_json_shape():
    """Test the serialized form."""
    data = (z(2, 1).scale(q) + LaurentPoly.one(2)).to_json()
    assert data["n"] == 2
    assert [term["exp"] for term in data["terms"]] == [[0, 0], [1, 0]]
    assert LaurentPoly.from_json(data) == z(2, 1).scale(q) + LaurentPoly.one(2)
