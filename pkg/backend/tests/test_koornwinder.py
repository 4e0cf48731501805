"""Tests for non-symmetric Koornwinder polynomials and their specializations."""
import pytest

from qkz_forge.errors import NotInSpan, UsageError
from qkz_forge.field import ParameterSet
from qkz_forge.hecke import apply_T, apply_Y, y_eigenvalues
from qkz_forge.koornwinder import (
    SpecDescriptor,
    build_span,
    compute_E,
    expand_in_basis,
    intertwiner_check,
    koornwinder_for,
    specialize_E,
    specialized_basis,
    support_candidates,
)
from qkz_forge.laurent import LaurentPoly, precedes
from qkz_forge.qkz import check_specialization_lemmas
from qkz_forge.report import failures
from qkz_forge.weyl import ONE_BOUNDARY, TWO_BOUNDARY, nu, xi_plus


def assert_eigenfunction(params, e):
    """Monic, triangular and a joint Y-eigenfunction."""
    assert e.poly.extract(e.weight) == 1
    assert all(precedes(mu, e.weight) for mu in e.poly.support())
    for i, y in enumerate(y_eigenvalues(params, e.weight), start=1):
        assert apply_Y(params, i, e.poly) == e.poly.scale(y)


def test_support_candidates_start_with_weight():
    """Test that the weight itself heads its candidate list."""
    assert support_candidates((1, 0))[0] == (1, 0)
    assert (0, 0) in support_candidates((1, 0))


@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)])
def test_small_weights(params, lam):
    """Test E for every weight of degree at most one at N=2."""
    assert_eigenfunction(params, compute_E(params, lam))


def test_constant_polynomial(params):
    """Test E_0 = 1."""
    assert compute_E(params, (0, 0)).poly == LaurentPoly.one(2)


@pytest.mark.slow
def test_admissible_orbit_two_sites(params):
    """Test E over the admissible component of nu^{1,+} at N=2."""
    for lam in build_span(nu(2, 1, 1, "+"), TWO_BOUNDARY, 1):
        assert_eigenfunction(params, compute_E(params, lam))


@pytest.mark.slow
def test_admissible_orbit_three_sites(params):
    """Test E over the eight weights of the admissible component of nu^{1,+} at N=3."""
    weights = build_span(nu(3, 1, 1, "+"), TWO_BOUNDARY, 1)
    assert len(weights) == 8
    for lam in weights:
        assert_eigenfunction(params, compute_E(params, lam))


def test_intertwiner_oracle(params):
    """Test phi_1 E_(0,1) against the solved E_(1,0)."""
    assert intertwiner_check(params, (0, 1), 1)


def test_koornwinder_for_frames():
    """Test that the one-boundary case works in the reduced frame."""
    reduced = koornwinder_for(ONE_BOUNDARY, 2, 1, (1, 0))
    standard = koornwinder_for(TWO_BOUNDARY, 2, 1, (1, 0))
    assert reduced.weight == standard.weight == (1, 0)
    assert_eigenfunction(ParameterSet.generic("reduced"), reduced)


def test_spec_descriptor_validation():
    """Test rejected specializations."""
    with pytest.raises(UsageError):
        SpecDescriptor(ONE_BOUNDARY, 2, 2)
    with pytest.raises(UsageError):
        SpecDescriptor(TWO_BOUNDARY, 2, 1, 1, "+", branch=2)


def test_two_boundary_constraint():
    """Test kappa0 kappaN = q^-5 q0 qN at N=2, J=r=1, sign +."""
    p = SpecDescriptor(TWO_BOUNDARY, 2, 1, 1, "+").params()
    assert p.kappa0 * p.kappaN == p.q0 * p.qN / p.q ** 5


def test_one_boundary_substitution():
    """Test qN^2 = -q and S q^3 = 1 in the reduced frame."""
    p = SpecDescriptor(ONE_BOUNDARY, 3, 1).params()
    assert p.qN * p.qN == -p.q
    assert p.s_squared * p.q ** 3 == 1


def test_expand_in_basis(params):
    """Test peeling a combination of monic polynomials."""
    basis = {lam: compute_E(params, lam).poly for lam in [(0, 0), (1, 0), (0, 1)]}
    f = basis[(1, 0)].scale(params.q) + basis[(0, 0)]
    assert expand_in_basis(f, basis) == {(1, 0): params.q, (0, 0): 1}
    with pytest.raises(NotInSpan):
        expand_in_basis(LaurentPoly.monomial((2, 0)), basis)


@pytest.mark.slow
@pytest.mark.parametrize("sign", ["+", "-"])
def test_two_boundary_specialization_lemma(sign):
    """Test (T_i - 1/q) E_nu = 0 for i < N after specialization."""
    spec = SpecDescriptor(TWO_BOUNDARY, 2, 1, 1, sign)
    report = check_specialization_lemmas(spec)
    assert report and failures(report) == []
    assert specialize_E(compute_E(spec.generic_params(), nu(2, 1, 1, sign)), spec)


@pytest.mark.slow
def test_one_boundary_specialization_lemma():
    """Test the annihilation lemmas of E_xi0 at N=3."""
    report = check_specialization_lemmas(SpecDescriptor(ONE_BOUNDARY, 3, 1))
    assert [relation for relation, _ in report] == ["e[1]E[2, 0, 1]=0", "e[3]E[2, 0, 1]=0"]
    assert failures(report) == []


@pytest.mark.slow
def test_last_generator_keeps_nonnegative_span():
    """Test that T_N maps the specialized nonnegative E basis into its own span at qN^2 = -q."""
    spec = SpecDescriptor(ONE_BOUNDARY, 2, 1)
    weights = build_span(xi_plus(2, 1), ONE_BOUNDARY, 1)
    assert all(min(w) >= 0 for w in weights)
    basis = specialized_basis(spec.generic_params(), weights, spec)
    params = spec.params()
    for lam in weights:
        image = apply_T(params, 2, basis[lam])
        assert set(expand_in_basis(image, basis)) <= set(weights)
