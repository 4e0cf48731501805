"""Tests for the Temperley-Lieb matrices and the R- and K-matrices."""
import pytest

from qkz_forge.errors import UsageError
from qkz_forge.field import FIELD_GENS, position
from qkz_forge.report import INFO_PREFIX, failures
from qkz_forge.tlrep import (
    apply_e_vector,
    build_e,
    build_K0,
    build_KN,
    build_R,
    check_hecke_quotient,
    check_tl_relations,
    check_ybe_reflection,
    ensure_tl_relations,
    ensure_ybe_reflection,
    i_j_words,
    identity,
    matrix_vector,
    same,
)


def test_bulk_generator_on_basis(params):
    """Test e_1 on v_{+-} and v_{-+}."""
    q = params.q
    assert apply_e_vector(params, 1, {"+-": q.field.one}) == {"+-": -1 / q, "-+": 1}
    assert apply_e_vector(params, 1, {"-+": q.field.one}) == {"+-": 1, "-+": -q}
    assert apply_e_vector(params, 1, {"++": q.field.one}) == {}


def test_boundary_generators_on_basis(params):
    """Test e_0 and e_N on one site."""
    one = params.q.field.one
    assert apply_e_vector(params, 0, {"+": one}) == {"+": -params.q0, "-": params.kappa0}
    assert apply_e_vector(params, 1, {"-": one}) == {"+": params.kappaN, "-": -params.qN}


def test_matrix_matches_vector_action(params):
    """Test that build_e and apply_e_vector agree."""
    vector = {"+-+": params.q, "--+": params.qN}
    for i in range(4):
        assert matrix_vector(build_e(params, i, 3), vector, 3) == apply_e_vector(params, i, vector)


def test_generator_index_out_of_range(params):
    """Test that generators run from 0 to N."""
    with pytest.raises(UsageError):
        build_e(params, 3, 2)
    with pytest.raises(UsageError):
        build_R(params, 2, params.q, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_tl_relations(params, n):
    """Test every Temperley-Lieb relation, boundary constants and the I/J quotient."""
    report = ensure_tl_relations(params, n)
    ids = [relation for relation, _ in report]
    assert "IJI" in ids and "JIJ" in ids
    assert f"tl[{n - 1},{n}]" in ids


@pytest.mark.slow
def test_tl_relations_four_sites(params):
    """Test the relations at N=4."""
    assert failures(check_tl_relations(params, 4)) == []


def test_kappa_weighted_constant_is_informational(params):
    """Test that the kappa-weighted boundary entries never fail a report."""
    report = check_tl_relations(params, 2)
    info = [entry for entry in report if entry[0].startswith(INFO_PREFIX)]
    assert len(info) == 2
    assert failures(report) == []


def test_tl_relations_need_two_sites(params):
    """Test that N=1 is rejected."""
    with pytest.raises(UsageError):
        check_tl_relations(params, 1)


def test_i_j_words():
    """Test the generator words by parity."""
    assert i_j_words(4) == ([1, 3], [0, 2, 4])
    assert i_j_words(3) == ([0, 2], [1, 3])


def test_hecke_quotient(params):
    """Test that e_i + 1/q_i satisfy the Hecke relations."""
    assert failures(check_hecke_quotient(params, 3)) == []


def test_unitarity_single_matrices(params):
    """Test R(z) R(1/z) = 1 and K(z) K(1/z) = 1 with a position variable."""
    lifted = params.lift()
    z = position(1)
    one = identity(lifted, 2)
    assert same(build_R(lifted, 1, z, 2).matmul(build_R(lifted, 1, 1 / z, 2)), one)
    assert same(build_KN(lifted, z, 2).matmul(build_KN(lifted, 1 / z, 2)), one)
    assert same(build_K0(lifted, z, 2).matmul(build_K0(lifted, 1 / z, 2)), one)


def test_R_at_one_is_identity(params):
    """Test R(1) = 1."""
    lifted = params.lift()
    one = FIELD_GENS["u"] / FIELD_GENS["u"]
    assert same(build_R(lifted, 1, one, 2), identity(lifted, 2))


def test_same_separates_matrices(params):
    """Test that differing matrices are told apart."""
    e1 = build_e(params, 1, 2)
    assert same(e1, build_e(params, 1, 2))
    assert not same(e1, identity(params, 2))
    assert not same(e1, build_e(params, 2, 2))


@pytest.mark.slow
def test_ybe_and_reflection(params):
    """Test Yang-Baxter at N=3 and both reflection equations."""
    report = check_ybe_reflection(params, 3)
    assert "ybe[1,2]" in [relation for relation, _ in report]
    assert failures(report) == []


@pytest.mark.slow
def test_reflection_two_sites(params):
    """Test unitarity and both reflection equations at N=2."""
    assert failures(ensure_ybe_reflection(params, 2)) == []
