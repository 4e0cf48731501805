"""Tests for the boundary qKZ solver and its checks."""
import pytest

from qkz_forge.errors import EquationFailed, NoSolution, UsageError, VanishingFailed
from qkz_forge.field import PARAM_GENS
from qkz_forge.klbasis import KLType
from qkz_forge.koornwinder import SpecDescriptor, build_span
from qkz_forge.laurent import LaurentPoly, order_key
from qkz_forge.qkz import (
    QkzState,
    _vanishing_lines,
    case_strings,
    check_action_lemmas,
    check_e_form,
    check_factorized,
    check_koornwinder_components,
    check_one_boundary_chain,
    check_one_boundary_eigen,
    check_one_boundary_propagation,
    check_reduced,
    check_scattering,
    check_tau_vanishing,
    ensure_equations,
    ensure_tau_vanishing,
    expected_weight,
    extreme_component,
    generating_string,
    koornwinder_leading,
    middle_string,
    minimal_closed_form,
    one_boundary_chain_strings,
    one_boundary_strings,
    propagate_state,
    proportional,
    reduce_equations,
    scattering_matrix,
    solve,
    solve_in_span,
    solve_one_boundary,
    solve_two_boundary,
    state_from_json,
    xi_one_proportional,
)
from qkz_forge.report import failures
from qkz_forge.schemas import QkzStateModel
from qkz_forge.weyl import ONE_BOUNDARY, TWO_BOUNDARY, nu, string_act


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reduction_count(n):
    """Test that the reduced system has 2^N + N - 2 equations."""
    paths, residual = reduce_equations(n)
    assert len(paths) + len(residual) == 2 ** n + n - 2


def test_reduction_paths():
    """Test shortest decreasing paths at N=2."""
    paths, residual = reduce_equations(2)
    assert paths["-+"].labels == (2,)
    assert paths["+-"].labels == (2, 1)
    assert paths["++"].end == "++"
    assert paths["++"].last_step() == ("+-", 2)
    assert residual == ["e[1]Psi0=0"]


def test_reduction_needs_two_sites():
    """Test that N=1 is rejected."""
    with pytest.raises(UsageError):
        reduce_equations(1)


def test_one_boundary_strings():
    """Test the strings with nonpositive prefix sums and their order."""
    assert one_boundary_strings(2) == ["--", "-+"]
    assert one_boundary_strings(3) == ["---", "--+", "-+-"]
    assert len(one_boundary_strings(4)) == 6
    assert case_strings(TWO_BOUNDARY, 2) == ["--", "-+", "+-", "++"]


def test_distinguished_strings():
    """Test the generating and middle strings."""
    assert generating_string(TWO_BOUNDARY, 3) == "---"
    assert generating_string(ONE_BOUNDARY, 2) == "-+"
    assert generating_string(ONE_BOUNDARY, 3) == "--+"
    assert middle_string(3) == "-+-"
    with pytest.raises(UsageError):
        middle_string(2)


def test_propagation_without_seed():
    """Test that nothing can be propagated from an empty seed set."""
    state = QkzState.empty(SpecDescriptor(TWO_BOUNDARY, 2), KLType("BII"))
    with pytest.raises(NoSolution):
        propagate_state(state, {})


def test_case_guards():
    """Test the usage errors of the solver entry points."""
    with pytest.raises(UsageError):
        solve("three", 2)
    with pytest.raises(UsageError):
        solve_one_boundary(1)
    one = QkzState.empty(SpecDescriptor(ONE_BOUNDARY, 2), KLType("BII"))
    two = QkzState.empty(SpecDescriptor(TWO_BOUNDARY, 2), KLType("BII"))
    with pytest.raises(UsageError):
        check_action_lemmas(one)
    with pytest.raises(UsageError):
        check_one_boundary_eigen(two)
    with pytest.raises(UsageError):
        check_one_boundary_propagation(two)


def test_scattering_index(params):
    """Test the range of the scattering index."""
    with pytest.raises(UsageError):
        scattering_matrix(params, 3, 2, TWO_BOUNDARY)


@pytest.mark.parametrize("case,expected", [(TWO_BOUNDARY, (2, 1)), (ONE_BOUNDARY, (1, 0))])
def test_closed_form_dominant_monomial(params, case, expected):
    """Test the top monomial of the product formula at N=2."""
    closed = minimal_closed_form(params, 2, case)
    assert max(closed.terms, key=lambda m: (order_key(m), m)) == expected


@pytest.mark.parametrize("case", [TWO_BOUNDARY, ONE_BOUNDARY])
@pytest.mark.parametrize("n", [2, 3])
def test_closed_form_vanishing(params, case, n):
    """Test that the product formula vanishes on every vanishing line."""
    closed = minimal_closed_form(params, n, case)
    for line, j, coeff, exps in _vanishing_lines(case, params, n):
        assert not closed.monomial_substitute(j, coeff, exps), line


def test_closed_form_reflection_invariance(params):
    """Test that the one-boundary formula is invariant under z_N -> 1/z_N."""
    closed = minimal_closed_form(params, 3, ONE_BOUNDARY)
    assert closed.weyl_substitute(3, params.s_squared) == closed


def test_proportional():
    """Test scalar multiples."""
    q = PARAM_GENS["q"]
    f = LaurentPoly.variable(2, 1) + LaurentPoly.one(2).scale(q)
    assert proportional(f, f.scale(q - 1))
    assert not proportional(f, LaurentPoly.variable(2, 1))
    assert not proportional(f, LaurentPoly(2))


@pytest.mark.slow
def test_two_boundary_equations(two_boundary_state):
    """Test the e-form, factorized and reduced systems on the solved state."""
    state = two_boundary_state
    assert all(state.component(b) for b in ("--", "++"))
    assert failures(check_e_form(state)) == []
    assert failures(check_factorized(state)) == []
    assert failures(check_reduced(state)) == []


@pytest.mark.slow
def test_two_boundary_vanishing(two_boundary_state):
    """Test that Psi_+ vanishes on the reflected lines."""
    report = check_tau_vanishing(two_boundary_state)
    assert len(report) == 6
    assert failures(report) == []


@pytest.mark.slow
def test_two_boundary_action_lemmas(two_boundary_state):
    """Test the T-action and Y-eigenvalue statements for the BII basis."""
    assert failures(check_action_lemmas(two_boundary_state)) == []


@pytest.mark.slow
def test_two_boundary_scattering(two_boundary_state):
    """Test the scattering form of the system."""
    assert failures(check_scattering(two_boundary_state)) == []


@pytest.mark.slow
def test_two_boundary_json(two_boundary_state):
    """Test the serialized state and reading it back."""
    data = two_boundary_state.to_json()
    model = QkzStateModel.model_validate(data)
    assert model.case == TWO_BOUNDARY
    assert set(model.components) == {"--", "-+", "+-", "++"}
    assert set(model.constraint) == {"kappa0*kappaN"}
    restored = state_from_json(data, two_boundary_state.spec, two_boundary_state.kl_type)
    for b in two_boundary_state.strings:
        assert restored.component(b) == two_boundary_state.component(b)


@pytest.mark.slow
def test_one_boundary_equations(one_boundary_state):
    """Test the e-form and factorized systems on the one-boundary state."""
    state = one_boundary_state
    assert state.strings == ["--", "-+"]
    assert failures(check_e_form(state)) == []
    report = check_factorized(state)
    assert ("factor-s0", True) in report
    assert failures(report) == []


@pytest.mark.slow
def test_one_boundary_lemmas(one_boundary_state):
    """Test eigenvalues, vanishing and the chain lemma on the one-boundary state."""
    assert failures(check_one_boundary_eigen(one_boundary_state)) == []
    assert failures(check_tau_vanishing(one_boundary_state)) == []
    assert failures(check_one_boundary_propagation(one_boundary_state)) == []
    assert set(one_boundary_state.to_json()["constraint"]) == {"qN^2", "-q"}


def test_ensure_helpers_raise():
    """Test that a constant Psi_+ fails both the vanishing and the equations."""
    state = QkzState.empty(SpecDescriptor(TWO_BOUNDARY, 2), KLType("BII"))
    state.components = {"++": LaurentPoly.one(2)}
    with pytest.raises(VanishingFailed):
        ensure_tau_vanishing(state)
    with pytest.raises(EquationFailed):
        ensure_equations(state)


@pytest.mark.slow
def test_two_boundary_ensure_helpers(two_boundary_state):
    """Test that the ensure helpers pass the solved state through."""
    assert ensure_tau_vanishing(two_boundary_state)
    assert ensure_equations(two_boundary_state)


@pytest.mark.slow
def test_seed_component_is_its_own_leading_weight(two_boundary_state):
    """Test that Psi_0 expands to E_nu alone."""
    leading = koornwinder_leading(two_boundary_state)
    assert leading["--"] == expected_weight(two_boundary_state, "--") == (2, 1)


def test_one_boundary_chain_strings():
    """Test the strings carrying the chain statements for both parities."""
    assert one_boundary_chain_strings(2) == ["-+", "--"]
    assert one_boundary_chain_strings(3) == ["--+", "---", "-+-"]
    assert one_boundary_chain_strings(4) == ["--++", "-+-+", "-+--"]
    assert one_boundary_chain_strings(5) == ["---++", "--+-+", "--+--", "--++-"]


def test_chain_needs_one_boundary():
    """Test that the chain statements reject a two-boundary state."""
    state = QkzState.empty(SpecDescriptor(TWO_BOUNDARY, 2), KLType("BII"))
    with pytest.raises(UsageError):
        check_one_boundary_chain(state)


@pytest.mark.slow
def test_two_boundary_action_lemma_entries(two_boundary_state):
    """Test that the T_0 and T_i statements on the seed are part of the report."""
    names = [name for name, _ in check_action_lemmas(two_boundary_state)]
    assert names[:2] == ["T[0]Psi0", "T[1]Psi~[1]"]
    assert "e[1]Psi0=0" in names


@pytest.mark.slow
@pytest.mark.parametrize("basis", ["BI:1", "BIII"])
def test_two_boundary_other_bases(basis):
    """Test the solved state and its action statements for the BI and BIII bases."""
    state = solve_two_boundary(2, 1, 1, "+", KLType.parse(basis))
    assert failures(check_e_form(state)) == []
    assert failures(check_factorized(state)) == []
    assert failures(check_action_lemmas(state)) == []


@pytest.mark.slow
def test_two_boundary_minus_family():
    """Test the solution seeded by E_nu of the minus family."""
    state = solve(TWO_BOUNDARY, 2, sign="-")
    assert failures(check_e_form(state)) == []
    assert failures(check_factorized(state)) == []
    assert koornwinder_leading(state)["--"] == nu(2, 1, 1, "-")


@pytest.mark.slow
def test_two_boundary_koornwinder_components(two_boundary_state):
    """Test the leading E-weight of every component against phi^{-1}."""
    report = check_koornwinder_components(two_boundary_state)
    assert [name for name, _ in report] == [f"leading[{b}]" for b in two_boundary_state.strings]
    assert failures(report) == []


@pytest.mark.slow
def test_component_outside_span_fails():
    """Test that a component outside the admissible span is a failing entry."""
    state = QkzState.empty(SpecDescriptor(TWO_BOUNDARY, 2), KLType("BII"))
    state.components = {"--": LaurentPoly.variable(2, 1)}
    assert check_koornwinder_components(state) == [("koornwinder-span", False)]


@pytest.mark.slow
def test_span_solve_matches_propagation(two_boundary_state):
    """Test the linear solve over the specialized E basis against propagation."""
    state = two_boundary_state
    weights = build_span(nu(2, 1, 1, "+"), TWO_BOUNDARY, 1)
    solved = solve_in_span(state, state.component("--"), weights)
    for b in state.strings:
        assert solved.get(b, LaurentPoly(2)) == state.component(b)


@pytest.mark.slow
def test_span_solve_rejects_constant_seed(two_boundary_state):
    """Test that a seed outside the solution space has no solution."""
    weights = build_span(nu(2, 1, 1, "+"), TWO_BOUNDARY, 1)
    with pytest.raises(NoSolution):
        solve_in_span(two_boundary_state, LaurentPoly.one(2), weights)


@pytest.mark.slow
def test_one_boundary_chain_entries(one_boundary_state):
    """Test that the chain statements are reported for N=2."""
    report = check_one_boundary_chain(one_boundary_state)
    assert [name for name, _ in report] == ["T[1]Psi~+[0]", "T[2]chain", "T[1]chain"]
    assert failures(report) == []
    names = [name for name, _ in check_one_boundary_propagation(one_boundary_state)]
    assert names[-3:] == ["T[1]Psi~+[0]", "T[2]chain", "T[1]chain"]


@pytest.mark.slow
def test_one_boundary_three_sites(one_boundary_state_three):
    """Test the one-boundary state at N=3, including Psi_mid ~ E_xi1."""
    state = one_boundary_state_three
    assert state.strings == one_boundary_strings(3)
    assert failures(check_e_form(state)) == []
    assert failures(check_one_boundary_eigen(state)) == []
    assert failures(check_tau_vanishing(state)) == []
    assert failures(check_one_boundary_propagation(state)) == []
    assert check_koornwinder_components(state) == [("Psi_mid~E_xi1", True)]
    assert xi_one_proportional(state)


@pytest.mark.slow
@pytest.mark.parametrize("fixture", ["two_boundary_state", "one_boundary_state"])
def test_extreme_component_matches_closed_form(request, fixture):
    """Test that Psi_+ or Psi_- is a multiple of the minimal closed form."""
    state = request.getfixturevalue(fixture)
    closed = minimal_closed_form(state.params, state.n, state.case)
    assert proportional(state.component(extreme_component(state.case, state.n)), closed)


@pytest.mark.slow
def test_alternative_reduction_paths_agree():
    """Test that propagating along other decreasing paths gives the same components at N=3."""
    state = solve_two_boundary(3, 1, 1, "+", KLType("BII"))
    paths, _ = reduce_equations(3)
    shortest = {v: p.last_step() for v, p in paths.items()}
    alternative = {}
    for v in paths:
        parents = [(string_act(i, v), i) for i in range(1, 4) if string_act(i, v) > v]
        alternative[v] = min(parents, key=lambda step: step[1])
    assert alternative != shortest
    components = propagate_state(state, {"---": state.component("---")}, alternative)
    for b in state.strings:
        assert components[b] == state.component(b)
