"""Boundary qKZ solutions: assembly, propagation and exact verification.

A state holds one Laurent polynomial per basis string. Components are built
from a seed component by the non-affine qKZ equations e_i Psi = e^_i Psi, read
row by row in the Kazhdan-Lusztig basis, and then checked against every
equation in matrix form.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix

from .config import settings
from .errors import (
    EquationFailed,
    NonUniqueSolution,
    NoSolution,
    NotInSpan,
    SpecializationPole,
    UsageError,
    VanishingFailed,
)
from .field import PARAMS, ParameterSet, Substitution, position, power, to_json, vanishes
from .hecke import apply_e, apply_T, apply_Y
from .klbasis import KLType, action_table, build_diagram, specialized_vector
from .koornwinder import (
    SpecDescriptor,
    build_span,
    compute_E,
    expand_in_basis,
    specialize_E,
    specialized_basis,
)
from .laurent import Exponent, LaurentPoly, linear_combination, order_key
from .report import Report, ensure
from .tlrep import (
    build_K0_shifted,
    build_KN,
    build_R,
    domain_of,
    identity,
    matrix_vector,
    product,
)
from .weyl import (
    ONE_BOUNDARY,
    TWO_BOUNDARY,
    BinaryString,
    Weight,
    all_strings,
    nu,
    phi_inverse,
    string_act,
    xi0,
    xi1,
    xi_plus,
)

logger = logging.getLogger(__name__)


def _prefix_sums(b: BinaryString) -> Tuple[int, ...]:
    total, out = 0, []
    for bit in b:
        total += 1 if bit == "+" else -1
        out.append(total)
    return tuple(out)


def one_boundary_strings(n: int) -> List[BinaryString]:
    """Strings whose prefix sums never go above zero, in increasing prefix-sum order."""
    strings = [b for b in all_strings(n) if max(_prefix_sums(b)) <= 0]
    return sorted(strings, key=lambda b: (sum(_prefix_sums(b)), b))


def case_strings(case: str, n: int) -> List[BinaryString]:
    if case == ONE_BOUNDARY:
        return one_boundary_strings(n)
    return sorted(all_strings(n), reverse=True)


def generating_string(case: str, n: int) -> BinaryString:
    """b_0: the component equal to the seed Koornwinder polynomial."""
    if case == TWO_BOUNDARY:
        return "-" * n
    half = (n + 1) // 2
    return "-" * half + "+" * (n - half)


def middle_string(n: int) -> BinaryString:
    """b_r for odd N: (N-1)/2 downs, (N-1)/2 ups, one down."""
    if n % 2 == 0:
        raise UsageError("the middle component exists only for odd N")
    half = (n - 1) // 2
    return "-" * half + "+" * half + "-"


@dataclass
class QkzState:
    """A solved (or candidate) qKZ state at a fixed specialization."""

    case: str
    n: int
    kl_type: KLType
    spec: SpecDescriptor
    params: ParameterSet
    substitution: Substitution
    components: Dict[BinaryString, LaurentPoly] = field(default_factory=dict)

    @classmethod
    def empty(cls, spec: SpecDescriptor, kl_type: KLType) -> "QkzState":
        return cls(spec.case, spec.n, kl_type, spec, spec.params(), spec.substitution())

    @property
    def strings(self) -> List[BinaryString]:
        return case_strings(self.case, self.n)

    def component(self, b: BinaryString) -> LaurentPoly:
        return self.components.get(b, LaurentPoly(self.n))

    def constraint_record(self) -> Dict[str, Dict[str, str]]:
        if self.case == TWO_BOUNDARY:
            return {"kappa0*kappaN": to_json(self.params.kappa0 * self.params.kappaN)}
        return {"qN^2": to_json(self.params.qN * self.params.qN), "-q": to_json(-self.params.q)}

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "N": self.n,
            "basis": self.kl_type.label,
            "spec": self.spec.describe(),
            "constraint": self.constraint_record(),
            "components": {b: self.component(b).to_json() for b in sorted(self.strings)},
        }


@dataclass(frozen=True)
class PathInGammaPrime:
    """A strictly decreasing walk from b_0 in the binary-string graph."""

    vertices: Tuple[BinaryString, ...]
    labels: Tuple[int, ...]

    @property
    def end(self) -> BinaryString:
        return self.vertices[-1]

    def last_step(self) -> Tuple[BinaryString, int]:
        return self.vertices[-2], self.labels[-1]


def reduce_equations(n: int) -> Tuple[Dict[BinaryString, PathInGammaPrime], List[str]]:
    """One path per string below b_0 plus the equations e^_i Psi_0 = 0.

    Each path is the shortest decreasing path from b_0, ties broken by the
    lexicographically smallest label sequence.
    """
    if n < 2:
        raise UsageError("the reduction needs N >= 2")
    top = "-" * n
    best: Dict[BinaryString, PathInGammaPrime] = {top: PathInGammaPrime((top,), ())}
    for v in sorted(all_strings(n), reverse=True):
        if v == top:
            continue
        candidates = []
        for i in range(1, n + 1):
            parent = string_act(i, v)
            if parent > v and parent in best:
                path = best[parent]
                candidates.append(PathInGammaPrime(path.vertices + (v,), path.labels + (i,)))
        best[v] = min(candidates, key=lambda p: (len(p.labels), p.labels))
    paths = {v: p for v, p in best.items() if v != top}
    residual = [f"e[{i}]Psi0=0" for i in range(1, n)]
    return paths, residual


def _row(table, alpha: BinaryString, strings: List[BinaryString]) -> Dict[BinaryString, FracElement]:
    allowed = set(strings)
    return {b: c for (a, b), c in table.items() if a == alpha and b in allowed}


def _tables(state: QkzState, generators) -> Dict[int, dict]:
    return {
        i: action_table(state.params, i, state.n, state.kl_type, state.substitution)
        for i in generators
    }


def _solve_row(
    state: QkzState,
    table,
    i: int,
    alpha: BinaryString,
    target: BinaryString,
    known: Dict[BinaryString, LaurentPoly],
    convention: Optional[str],
) -> Optional[LaurentPoly]:
    """Psi_target from row alpha of e_i, if every other entry of the row is known."""
    row = _row(table, alpha, state.strings)
    pivot = row.get(target)
    if not pivot or alpha not in known:
        return None
    if any(b not in known for b in row if b != target):
        return None
    pairs = [(1, apply_e(state.params, i, known[alpha], convention))]
    pairs += [(-c, known[b]) for b, c in row.items() if b != target]
    return linear_combination(state.n, pairs).scale(1 / pivot)


def propagate_state(
    state: QkzState,
    seeds: Dict[BinaryString, LaurentPoly],
    preferred: Optional[Dict[BinaryString, Tuple[BinaryString, int]]] = None,
    convention: Optional[str] = None,
) -> Dict[BinaryString, LaurentPoly]:
    """Every component from the seeds, via the non-affine equations.

    ``preferred`` names the (row, generator) used for a string; otherwise the
    first usable row is taken, rows in the order of ``state.strings``.
    """
    n = state.n
    generators = list(range(1, n + 1))
    tables = _tables(state, generators)
    known = dict(seeds)
    pending = [b for b in state.strings if b not in known]
    preferred = preferred or {}
    while pending:
        progress = False
        for target in list(pending):
            attempts = []
            if target in preferred:
                attempts.append(preferred[target])
            attempts += [(alpha, i) for alpha in state.strings if alpha in known for i in generators]
            for alpha, i in attempts:
                value = _solve_row(state, tables[i], i, alpha, target, known, convention)
                if value is not None:
                    known[target] = value
                    pending.remove(target)
                    progress = True
                    break
        if not progress:
            raise NoSolution(f"propagate[{pending[0]}]", "no usable equation")
    logger.debug("propagated %d components from %d seeds", len(known), len(seeds))
    return known


def _standard_components(state: QkzState) -> Dict[BinaryString, LaurentPoly]:
    """Components of Psi in the standard basis v_epsilon."""
    out: Dict[BinaryString, List] = {}
    for b, psi in state.components.items():
        for eps, c in specialized_vector(b, state.kl_type, state.substitution).items():
            out.setdefault(eps, []).append((c, psi))
    return {eps: linear_combination(state.n, pairs) for eps, pairs in out.items()}


def _field_vector(polys: Dict[BinaryString, LaurentPoly]) -> Dict[BinaryString, FracElement]:
    return {eps: f.to_field() for eps, f in polys.items() if f}


def _same_vector(a: Dict[BinaryString, FracElement], b: Dict[BinaryString, FracElement]) -> bool:
    keys = set(a) | set(b)
    return all(vanishes(a.get(k, 0) - b.get(k, 0)) for k in keys)


def _moved(polys: Dict[BinaryString, LaurentPoly], i: int, s_squared: FracElement) -> Dict[BinaryString, FracElement]:
    return _field_vector({eps: f.weyl_substitute(i, s_squared) for eps, f in polys.items()})


def check_factorized(state: QkzState) -> Report:
    """Psi(s_i z) against R-, K_N- and K_0-matrices applied to Psi(z)."""
    n = state.n
    params = state.params.lift()
    S = state.params.s_squared
    polys = _standard_components(state)
    vector = _field_vector(polys)
    z = [None] + [position(k) for k in range(1, n + 1)]
    report: Report = [("nontrivial", bool(vector))]
    for i in range(1, n):
        image = matrix_vector(build_R(params, i, z[i + 1] / z[i], n), vector, n)
        report.append((f"factor-R[{i}]", _same_vector(_moved(polys, i, S), image)))
    image = matrix_vector(build_KN(params, z[n], n), vector, n)
    report.append(("factor-KN", _same_vector(_moved(polys, n, S), image)))
    if state.case == TWO_BOUNDARY:
        image = matrix_vector(build_K0_shifted(params, z[1], n), vector, n)
        report.append(("factor-K0", _same_vector(_moved(polys, 0, S), image)))
    else:
        report.append(("factor-s0", _same_vector(_moved(polys, 0, S), vector)))
    logger.debug("factorized check at N=%d: %d entries", n, len(report))
    return report


def scattering_matrix(params: ParameterSet, i: int, n: int, case: str) -> DomainMatrix:
    """S_i: move z_i right, reflect at N, move left, reflect at 0, move back."""
    if not 1 <= i <= n:
        raise UsageError(f"scattering index {i} outside 1..{n}")
    params = params.lift()
    S = params.s_squared
    z = [None] + [position(k) for k in range(1, n + 1)]
    factors = [build_R(params, k, z[i] / (S * z[k + 1]), n) for k in range(i, n)]
    factors.append(build_KN(params, S / z[i], n))
    others = [j for j in range(1, n + 1) if j != i]
    for k in range(n - 1, 0, -1):
        factors.append(build_R(params, k, z[i] * z[others[k - 1]] / S, n))
    if case == TWO_BOUNDARY:
        factors.append(build_K0_shifted(params, z[i], n))
    factors += [build_R(params, k, z[i] / z[k], n) for k in range(1, i)]
    return product(factors) if factors else identity(params, n)


def _shift_variable(f: LaurentPoly, i: int, factor: FracElement) -> LaurentPoly:
    """f with z_i replaced by factor * z_i."""
    return f.map_terms(lambda e, c: (e, c * power(factor, e[i - 1])))


def check_scattering(state: QkzState) -> Report:
    """S_i(z) Psi(z) = Psi(..., z_i / s^2, ...) for every i."""
    n = state.n
    polys = _standard_components(state)
    vector = _field_vector(polys)
    S = state.params.s_squared
    report: Report = []
    for i in range(1, n + 1):
        image = matrix_vector(scattering_matrix(state.params, i, n, state.case), vector, n)
        shifted = _field_vector({eps: _shift_variable(f, i, 1 / S) for eps, f in polys.items()})
        report.append((f"scatter[{i}]", _same_vector(shifted, image)))
    return report


def _e_generators(state: QkzState) -> List[int]:
    start = 0 if state.case == TWO_BOUNDARY else 1
    return list(range(start, state.n + 1))


def check_e_form(state: QkzState, convention: Optional[str] = None) -> Report:
    """Row by row: e^_i Psi_a = sum_b A^i_{ab} Psi_b."""
    generators = _e_generators(state)
    tables = _tables(state, generators)
    report: Report = []
    for i in generators:
        for a in state.strings:
            row = _row(tables[i], a, state.strings)
            lhs = apply_e(state.params, i, state.component(a), convention)
            rhs = linear_combination(state.n, [(c, state.component(b)) for b, c in row.items()])
            report.append((f"e-form[{i},{a}]", lhs == rhs))
    if state.case == ONE_BOUNDARY:
        inside = set(state.strings)
        for i in generators:
            leaks = [a for (a, b) in tables[i] if b in inside and a not in inside]
            report.append((f"closed[{i}]", not leaks))
    return report


def check_reduced(state: QkzState, convention: Optional[str] = None) -> Report:
    """The reduced system: one equation per path plus e^_i Psi_0 = 0 (two-boundary)."""
    n = state.n
    paths, _ = reduce_equations(n)
    generators = list(range(1, n + 1))
    tables = _tables(state, generators)
    report: Report = []
    for v, path in sorted(paths.items(), reverse=True):
        alpha, i = path.last_step()
        row = _row(tables[i], alpha, state.strings)
        lhs = apply_e(state.params, i, state.component(alpha), convention)
        rhs = linear_combination(n, [(c, state.component(b)) for b, c in row.items()])
        report.append((f"path[{v}]", lhs == rhs))
    psi0 = state.component(generating_string(state.case, n))
    for i in range(1, n):
        report.append((f"e[{i}]Psi0=0", not apply_e(state.params, i, psi0, convention)))
    return report


def _verify(state: QkzState) -> QkzState:
    for report in (check_e_form(state), check_factorized(state)):
        ensure(report, NoSolution)
    return state


def solve_two_boundary(n: int, r: int, j: int, sign: str, kl_type: KLType, branch: int = 1) -> QkzState:
    """Psi_0 = E_{nu^{J,sign}} at the specialization; the rest by propagation."""
    spec = SpecDescriptor(TWO_BOUNDARY, n, r, j, sign, branch, kl_type.m if kl_type.kind == "BI" else None)
    state = QkzState.empty(spec, kl_type)
    top = nu(n, r, j, sign)
    psi0 = specialize_E(compute_E(spec.generic_params(), top), spec)
    paths, _ = reduce_equations(n)
    preferred = {v: p.last_step() for v, p in paths.items()}
    state.components = propagate_state(state, {generating_string(TWO_BOUNDARY, n): psi0}, preferred)
    logger.info("two-boundary state N=%d r=%d J=%d sign=%s %s", n, r, j, sign, kl_type.label)
    if n <= settings.span_solve_max_n:
        solved = solve_in_span(state, psi0, build_span(top, TWO_BOUNDARY, r))
        for b in state.strings:
            if solved.get(b, LaurentPoly(n)) != state.component(b):
                raise NoSolution("two-boundary", f"span solve and propagation differ at {b}")
    return _verify(state)


def solve_in_span(state: QkzState, psi0: LaurentPoly, weights: List[Weight]) -> Dict[BinaryString, LaurentPoly]:
    """Every component as a combination of specialized E over ``weights``, Psi_0 fixed.

    The unknowns are the coefficients c_{b, xi} for b != b_0; every e-form row
    for generators 0..N gives one linear equation per monomial.
    """
    n = state.n
    b0 = generating_string(state.case, n)
    basis = specialized_basis(state.spec.generic_params(), weights, state.spec)
    others = [b for b in state.strings if b != b0]
    unknowns = [(b, xi) for b in others for xi in weights]
    index = {key: k for k, key in enumerate(unknowns)}
    generators = _e_generators(state)
    tables = _tables(state, generators)
    rows: List[Dict[int, FracElement]] = []
    for i in generators:
        images = {xi: apply_e(state.params, i, basis[xi]) for xi in weights}
        for a in state.strings:
            row = _row(tables[i], a, state.strings)
            pairs: Dict[int, List[Tuple[FracElement, LaurentPoly]]] = {}
            constant = [(-c, psi0) for b, c in row.items() if b == b0]
            if a == b0:
                constant.append((1, apply_e(state.params, i, psi0)))
            else:
                for xi in weights:
                    pairs.setdefault(index[(a, xi)], []).append((1, images[xi]))
            for b, c in row.items():
                if b != b0:
                    for xi in weights:
                        pairs.setdefault(index[(b, xi)], []).append((-c, basis[xi]))
            columns = [LaurentPoly(n)] * len(unknowns) + [linear_combination(n, constant)]
            for k, terms in pairs.items():
                columns[k] = linear_combination(n, terms)
            rows.extend(_equation_rows(columns))
    width = len(unknowns) + 1
    if not rows:
        raise NonUniqueSolution("two-boundary", "no constraints on the coefficients")
    dod = {k: row for k, row in enumerate(rows)}
    system = DomainMatrix.from_dod(dod, (len(rows), width), domain_of(PARAMS))
    kernel = system.to_dense().nullspace().to_list()
    logger.debug("span system: %d rows, %d unknowns, kernel %d", len(rows), width, len(kernel))
    if not kernel:
        raise NoSolution("two-boundary", "the span system is inconsistent")
    if len(kernel) > 1:
        raise NonUniqueSolution("two-boundary", f"kernel of dimension {len(kernel)}")
    solution = kernel[0]
    scale = solution[-1]
    if not scale:
        raise NoSolution("two-boundary", "Psi_0 drops out of the span system")
    components = {b0: psi0}
    for b in others:
        pairs = [(solution[index[(b, xi)]] / scale, basis[xi]) for xi in weights]
        combo = linear_combination(n, pairs)
        if combo:
            components[b] = combo
    return components


def _equation_rows(columns: List[LaurentPoly]) -> List[Dict[int, FracElement]]:
    """One linear row per monomial: sum_k x_k * columns[k] = 0."""
    monomials = sorted({m for col in columns for m in col.terms})
    rows = []
    for m in monomials:
        row = {k: col.terms[m] for k, col in enumerate(columns) if m in col.terms}
        if row:
            rows.append(row)
    return rows


def _vanishing_lines(case: str, params: ParameterSet, n: int) -> List[Tuple[str, int, FracElement, Exponent]]:
    """(line id, j, coeff, exps): substitute z_j -> coeff * z^exps."""
    q = params.q
    unit = lambda k, v=1: tuple(v if m == k - 1 else 0 for m in range(n))
    lines = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lines.append((f"z{j}=q^2*z{i}", j, q * q, unit(i)))
            if case == TWO_BOUNDARY:
                lines.append((f"z{j}=q^-2/z{i}", j, 1 / (q * q), unit(i, -1)))
    if case == TWO_BOUNDARY:
        qN, zN = params.qN, params.zetaN
        zero = (0,) * n
        for i in range(1, n + 1):
            lines.append((f"z{i}=-1/(qN*zetaN)", i, -1 / (qN * zN), zero))
            lines.append((f"z{i}=zetaN/qN", i, zN / qN, zero))
    return lines


def solve_one_boundary(n: int, r: int = 1) -> QkzState:
    """Psi_- as a combination of specialized E_xi fixed by vanishing and Psi_0 = E_{xi^0}."""
    if n < 2:
        raise UsageError("the one-boundary solver needs N >= 2")
    spec = SpecDescriptor(ONE_BOUNDARY, n, r)
    state = QkzState.empty(spec, KLType("BII"))
    generic = spec.generic_params()
    weights = build_span(xi_plus(n, r), ONE_BOUNDARY, r)
    basis = specialized_basis(generic, weights, spec)
    bottom = "-" * n
    b0 = generating_string(ONE_BOUNDARY, n)
    target = specialize_E(compute_E(generic, xi0(n, r)), spec)
    propagated = {xi: propagate_state(state, {bottom: basis[xi]}) for xi in weights}

    columns_per_family: List[List[LaurentPoly]] = []
    for _, j, coeff, exps in _vanishing_lines(ONE_BOUNDARY, state.params, n):
        columns_per_family.append([basis[xi].monomial_substitute(j, coeff, exps) for xi in weights] + [LaurentPoly(n)])
    columns_per_family.append([propagated[xi][b0] for xi in weights] + [-target])
    rows = [row for columns in columns_per_family for row in _equation_rows(columns)]
    width = len(weights) + 1
    if not rows:
        raise NonUniqueSolution("one-boundary", "no constraints on the coefficients")
    dod = {k: row for k, row in enumerate(rows)}
    system = DomainMatrix.from_dod(dod, (len(rows), width), domain_of(PARAMS))
    kernel = system.to_dense().nullspace().to_list()
    logger.debug("one-boundary system: %d rows, %d unknowns, kernel %d", len(rows), width, len(kernel))
    if not kernel:
        raise NoSolution("one-boundary", "only the zero solution")
    if len(kernel) > 1:
        raise NonUniqueSolution("one-boundary", f"kernel of dimension {len(kernel)}")
    solution = kernel[0]
    scale = solution[-1]
    if not scale:
        raise NoSolution("one-boundary", "Psi_0 vanishes")
    coeffs = [c / scale for c in solution[:-1]]
    state.components = {
        b: linear_combination(n, [(c, propagated[xi][b]) for c, xi in zip(coeffs, weights)])
        for b in state.strings
    }
    logger.info("one-boundary state N=%d r=%d", n, r)
    return _verify(state)


def minimal_closed_form(params: ParameterSet, n: int, case: str) -> LaurentPoly:
    """The product formula for Psi_+ (two-boundary) or Psi_- (one-boundary) with C = 1."""
    q = params.q
    z = [None] + [LaurentPoly.variable(n, k) for k in range(1, n + 1)]
    z_inv = [None] + [LaurentPoly.monomial(tuple(-1 if m == k - 1 else 0 for m in range(n))) for k in range(1, n + 1)]
    shift = n - 2 if case == TWO_BOUNDARY else n - 1
    result = LaurentPoly.monomial((-shift,) * n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            result = result * (z[i].scale(q) - z[j].scale(1 / q))
            result = result * ((z[i] * z[j]).scale(q) - LaurentPoly.one(n).scale(1 / q))
    if case == TWO_BOUNDARY:
        qN, zN = params.qN, params.zetaN
        for i in range(1, n + 1):
            result = result * (LaurentPoly.one(n) + z_inv[i].scale(1 / (qN * zN)))
            result = result * (LaurentPoly.one(n) - z_inv[i].scale(zN / qN))
    return result


def proportional(f: LaurentPoly, g: LaurentPoly) -> bool:
    """f = c g for a nonzero scalar c."""
    if not f or not g:
        return False
    m = next(iter(g.terms))
    if m not in f.terms:
        return False
    return f.scale(g.terms[m]) == g.scale(f.terms[m])


def extreme_component(case: str, n: int) -> BinaryString:
    """Psi_+ for two boundaries, Psi_- for one."""
    return "+" * n if case == TWO_BOUNDARY else "-" * n


def check_tau_vanishing(state: QkzState) -> Report:
    f = state.component(extreme_component(state.case, state.n))
    report: Report = []
    for line, j, coeff, exps in _vanishing_lines(state.case, state.params, state.n):
        report.append((f"vanish[{line}]", not f.monomial_substitute(j, coeff, exps)))
    return report


def ensure_tau_vanishing(state: QkzState) -> Report:
    return ensure(check_tau_vanishing(state), VanishingFailed)


def ensure_equations(state: QkzState) -> Report:
    return ensure(check_factorized(state) + check_e_form(state), EquationFailed)


def _single_plus(n: int, j: int) -> BinaryString:
    """b_j: one up arrow at site j, downs elsewhere."""
    return "-" * (j - 1) + "+" + "-" * (n - j)


def _first_site_shift(state: QkzState) -> FracElement:
    """Coefficient of Psi_0 in T^_0 Psi_0 beside kappa0 Psi~_1."""
    n, p = state.n, state.params
    kind = state.kl_type.kind
    kk = p.kappa0 * p.kappaN
    if kind == "BI":
        mark = build_diagram("-" * n, state.kl_type).mark_at(1)
        return -kk * power(p.q, -mark.value) if mark else PARAMS.zero
    if kind == "BII":
        return kk * p.qN / p.q if n % 2 == 0 else -kk / p.qN
    return -kk * power(p.q, n - 1) / p.qN


def _site_shift(state: QkzState, i: int) -> FracElement:
    """Coefficient of Psi_0 in T^_i Psi~_i beside Psi~_{i+1}, 1 <= i <= N-1."""
    n, p = state.n, state.params
    kind = state.kl_type.kind
    if kind == "BI":
        mark = build_diagram("-" * n, state.kl_type).mark_at(i + 1)
        return -p.kappaN / p.q if mark and mark.value == 1 else PARAMS.zero
    if kind == "BII":
        if (n - i) % 2:
            return -p.kappaN / p.q * (p.qN / p.q + p.q / p.qN)
        return p.kappaN / p.q * (p.qN + 1 / p.qN)
    return PARAMS.zero


def check_action_lemmas(state: QkzState) -> Report:
    """Two-boundary action of T^_0..T^_N and Y^_i on the components along b_0, b_1, .., b_N.

    b_j carries a single up arrow at site j and Psi~_j = Psi_j - q^-1 Psi_{j+1}
    (Psi~_N = Psi_N). T^_i is e^_i plus the boundary-parameter shift.
    """
    if state.case != TWO_BOUNDARY:
        raise UsageError("the action lemmas are stated for the two-boundary case")
    n, p = state.n, state.params
    psi0 = state.component("-" * n)
    psi = [psi0] + [state.component(_single_plus(n, j)) for j in range(1, n + 1)]
    tilde = [psi0] + [
        linear_combination(n, [(1, psi[j]), (-1 / p.q, psi[j + 1])]) for j in range(1, n)
    ] + [psi[n]]
    psi_n = psi[n]
    report: Report = []
    first = linear_combination(n, [(p.kappa0, tilde[1]), (_first_site_shift(state), psi0)])
    report.append(("T[0]Psi0", apply_T(p, 0, psi0) == first))
    for i in range(1, n):
        rhs = linear_combination(n, [(1, tilde[i + 1]), (_site_shift(state, i), psi0)])
        report.append((f"T[{i}]Psi~[{i}]", apply_T(p, i, tilde[i]) == rhs))
    for i in range(1, n):
        report.append((f"e[{i}]Psi0=0", not apply_e(p, i, psi0)))
    kk = p.kappa0 * p.kappaN
    for i in range(1, n + 1):
        report.append((f"Y[{i}]Psi0", apply_Y(p, i, psi0) == psi0.scale(kk * power(p.q, 2 * i - n - 1))))
    m = power(p.q, -state.kl_type.m) if state.kl_type.kind == "BI" else 1 / p.qN
    lhs = apply_T(p, n, linear_combination(n, [(1, psi_n), (-p.kappaN * m, psi0)]))
    report.append(("T[N](Psi_N-kappaN*m*Psi0)", lhs == psi0.scale(p.kappaN)))
    return report


def one_boundary_eigenvalues(params: ParameterSet, n: int, middle: bool = False) -> List[FracElement]:
    """The Y-eigenvalue table of Psi_0, or of Psi_{(N+1)/2} for odd N."""
    q, q0, qN = params.q, params.q0, params.qN
    up = lambda e: power(q, e) * q0 * qN
    down = lambda e: -power(q, e) * q0 / qN
    out = []
    for i in range(1, n + 1):
        if middle:
            out.append(down(-(n - 1 - 2 * i)) if i <= (n - 1) // 2 else up(-2 * (n - i)))
        elif n % 2:
            out.append(up(-(n + 1 - 2 * i)) if i <= (n + 1) // 2 else down(-2 * (n - i)))
        else:
            out.append(up(-(n - 2 * i)) if i <= n // 2 else down(-2 * (n - i)))
    return out


def check_one_boundary_eigen(state: QkzState) -> Report:
    if state.case != ONE_BOUNDARY:
        raise UsageError("the eigenvalue table is stated for the one-boundary case")
    n, p = state.n, state.params
    targets = [("Psi0", generating_string(ONE_BOUNDARY, n), False)]
    if n % 2:
        targets.append(("Psi_mid", middle_string(n), True))
    report: Report = []
    for name, b, middle in targets:
        psi = state.component(b)
        for i, y in enumerate(one_boundary_eigenvalues(p, n, middle), start=1):
            report.append((f"Y[{i}]{name}", apply_Y(p, i, psi) == psi.scale(y)))
    return report


def check_one_boundary_propagation(state: QkzState) -> Report:
    """The chain lemma near b_- : Psi_{b_{N-1}} = kappaN (T_N + qN) Psi_-."""
    if state.case != ONE_BOUNDARY:
        raise UsageError("the chain lemma is stated for the one-boundary case")
    n, p = state.n, state.params
    bottom = state.component("-" * n)
    first = state.component("-" * (n - 2) + "-+")
    image = linear_combination(n, [(p.kappaN, apply_T(p, n, bottom)), (p.kappaN * p.qN, bottom)])
    report: Report = [("Psi[b_(N-1)]=kappaN(T_N+qN)Psi_-", first == image)]
    # b_i: a single down-up pair at sites (i, i+1); b_0 and b_N give zero.
    arc = lambda i: state.component("-" * (i - 1) + "-+" + "-" * (n - i - 1)) if 0 < i < n else LaurentPoly(n)
    for i in range(1, n):
        if (n - i) % 2:
            alpha = p.kappaN * (p.q / p.qN + p.qN / p.q)
        else:
            alpha = -p.kappaN * (p.qN + 1 / p.qN)
        rhs = linear_combination(
            n, [(1, apply_T(p, i, arc(i))), (p.q, arc(i)), (-1, arc(i + 1)), (-alpha, bottom)]
        )
        report.append((f"Psi[b_{i - 1}]=(T_{i}+q)Psi[b_{i}]-Psi[b_{i + 1}]-alpha*Psi_-", arc(i - 1) == rhs))
    return report + check_one_boundary_chain(state)


def one_boundary_chain_strings(n: int) -> List[BinaryString]:
    """The strings b_0, .., b_h (and b_{h+1} for odd N) linking b_0 to the two-down tail."""
    h = n // 2 if n % 2 == 0 else (n - 1) // 2
    lead = h - 1 if n % 2 == 0 else h
    strings = [("-" * lead) + "+" * i + "-" + "+" * (h - i) for i in range(h)]
    if n % 2 == 0:
        strings.append("-" * (h - 1) + "+" * (h - 1) + "--")
    else:
        strings.append("-" * h + "+" * (h - 1) + "--")
        strings.append(middle_string(n))
    return strings


def check_one_boundary_chain(state: QkzState) -> Report:
    """T^ along the chain b_0 -> b_h -> b_0 with Psi~^{+/-}_i = Psi_i - q^{+/-1} Psi_{i-1}.

    For odd N the T^_{N-1} steps also pick up Psi_{h+1} = Psi_mid.
    """
    if state.case != ONE_BOUNDARY:
        raise UsageError("the chain lemma is stated for the one-boundary case")
    n, p = state.n, state.params
    q = p.q
    chain = one_boundary_chain_strings(n)
    psi = [state.component(b) for b in chain]
    h = n // 2 if n % 2 == 0 else (n - 1) // 2
    last = h - 1
    start = h if n % 2 == 0 else h + 1
    mid = psi[h + 1] if n % 2 else LaurentPoly(n)
    below = lambda i: psi[i - 1] if i > 0 else LaurentPoly(n)
    plus = lambda i: linear_combination(n, [(1, psi[i]), (-q, below(i))])
    minus = lambda i: linear_combination(n, [(1, psi[i]), (-1 / q, below(i))])
    alpha = p.kappaN * (q / p.qN + p.qN / q)
    report: Report = []
    for i in range(last):
        report.append((f"T[{start + i}]Psi~+[{i}]", apply_T(p, start + i, plus(i)) == plus(i + 1)))
    up = linear_combination(n, [(-q, psi[last]), (alpha, psi[h]), (1, mid)])
    report.append((f"T[{n - 1}]Psi~+[{last}]", apply_T(p, n - 1, plus(last)) == up))
    turn = linear_combination(n, [(-q, psi[last]), (alpha, psi[h])])
    back = linear_combination(n, [(1 / q, psi[last]), (-alpha, psi[h])])
    report.append((f"T[{n}]chain", apply_T(p, n, turn) == back.scale(p.qN)))
    down = linear_combination(n, [(-1, minus(last)), (1 / q, mid)])
    report.append((f"T[{n - 1}]chain", apply_T(p, n - 1, back) == down))
    for i in range(last):
        report.append((f"T[{start + i}]Psi~-[{i + 1}]", apply_T(p, start + i, minus(i + 1)) == minus(i)))
    return report


def _state_basis(state: QkzState) -> Dict[Weight, LaurentPoly]:
    """Specialized E over the admissible component the state lives in."""
    spec = state.spec
    if state.case == TWO_BOUNDARY:
        seed = nu(state.n, spec.r, spec.j, spec.sign)
    else:
        seed = xi_plus(state.n, spec.r)
    weights = build_span(seed, state.case, spec.r)
    return specialized_basis(spec.generic_params(), weights, spec)


def koornwinder_support(state: QkzState) -> Dict[BinaryString, Dict[Weight, FracElement]]:
    """E-expansion of every nonzero component."""
    basis = _state_basis(state)
    return {b: expand_in_basis(state.component(b), basis) for b in state.strings if state.component(b)}


def koornwinder_leading(state: QkzState) -> Dict[BinaryString, Weight]:
    """For each component, the weight with the largest order key in its E-expansion."""
    return {
        b: max(coefficients, key=lambda w: (order_key(w), w))
        for b, coefficients in koornwinder_support(state).items()
    }


def expected_weight(state: QkzState, b: BinaryString) -> Weight:
    """phi^{-1}(b): phi_- for the + family and phi_+ for the - family."""
    spec = state.spec
    flipped = "-" if spec.sign == "+" else "+"
    return phi_inverse(b, flipped, state.n, spec.r, spec.j)


def xi_one_proportional(state: QkzState) -> bool:
    """Psi_{(N+1)/2} is a multiple of the specialized E_{xi^1} (odd N)."""
    spec = state.spec
    e1 = specialize_E(compute_E(spec.generic_params(), xi1(state.n, spec.r)), spec)
    return proportional(state.component(middle_string(state.n)), e1)


def check_koornwinder_components(state: QkzState) -> Report:
    """Leading E-weight of every two-boundary component, or Psi_mid ~ E_{xi^1} for odd N."""
    try:
        if state.case == TWO_BOUNDARY:
            leading = koornwinder_leading(state)
            return [(f"leading[{b}]", leading.get(b) == expected_weight(state, b)) for b in state.strings]
        if state.n % 2:
            return [("Psi_mid~E_xi1", xi_one_proportional(state))]
    except (NotInSpan, SpecializationPole) as exc:
        logger.warning("component outside the Koornwinder span: %s", exc)
        return [("koornwinder-span", False)]
    return []


def solve(case: str, n: int, r: int = 1, j: int = 1, sign: str = "+", kl_type: Optional[KLType] = None, branch: int = 1) -> QkzState:
    if case == TWO_BOUNDARY:
        return solve_two_boundary(n, r, j, sign, kl_type or KLType("BII"), branch)
    if case == ONE_BOUNDARY:
        return solve_one_boundary(n, r)
    raise UsageError(f"unknown boundary case: {case}")


def state_from_json(data: dict, spec: SpecDescriptor, kl_type: KLType) -> QkzState:
    state = QkzState.empty(spec, kl_type)
    state.components = {b: LaurentPoly.from_json(poly) for b, poly in data["components"].items()}
    return state


def check_specialization_lemmas(spec: SpecDescriptor) -> Report:
    """e^_i kills the seed polynomial at the specialization.

    Two-boundary: i < N on E_nu. One-boundary: every i except (N+1)//2, and
    i = N, on E_{xi^0}.
    """
    params = spec.params()
    if spec.case == TWO_BOUNDARY:
        seed = nu(spec.n, spec.r, spec.j, spec.sign)
        generators = list(range(1, spec.n))
    else:
        seed = xi0(spec.n, spec.r)
        generators = [i for i in range(1, spec.n + 1) if i != (spec.n + 1) // 2]
    f = specialize_E(compute_E(spec.generic_params(), seed), spec)
    return [(f"e[{i}]E{list(seed)}=0", not apply_e(params, i, f)) for i in generators]
