"""Matrix representation of the two-boundary Temperley-Lieb algebra on V^{(x)N}.

Basis vectors are binary strings in lexicographic order with "+" < "-".
Matrices are sparse sympy ``DomainMatrix`` objects over the fraction field
that holds the parameters: ``PARAMS`` for e_i, ``FIELD`` for R- and K-matrices.
Products stay sparse (``matmul``) and zero entries are dropped as they appear.
"""
import logging
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from sympy.polys.fields import FracElement, FracField
from sympy.polys.matrices import DomainMatrix

from .errors import IdentityFailed, RelationFailed, UsageError
from .field import FIELD_GENS, ParameterSet, vanishes
from .report import INFO_PREFIX, Report, ensure
from .weyl import BinaryString, all_strings

logger = logging.getLogger(__name__)

Vector = Dict[BinaryString, FracElement]

_DOMAINS: Dict[int, object] = {}


def domain_of(field: FracField):
    """The ``FractionField`` domain of one of the engine fields (cached)."""
    key = id(field)
    if key not in _DOMAINS:
        _DOMAINS[key] = field.to_domain()
    return _DOMAINS[key]


def _field_of(params: ParameterSet) -> FracField:
    return params.q.field


@lru_cache(maxsize=None)
def basis_index(n: int) -> Dict[BinaryString, int]:
    return {alpha: k for k, alpha in enumerate(all_strings(n))}


def _site_images(params: ParameterSet, i: int, n: int, alpha: BinaryString) -> Vector:
    """e_i v_alpha as a sparse vector."""
    q = params.q
    if i == 0:
        k0 = params.kappa0
        q0 = params.q0
        rest = alpha[1:]
        if alpha[0] == "+":
            return {"+" + rest: -q0, "-" + rest: k0}
        return {"+" + rest: 1 / k0, "-" + rest: -1 / q0}
    if i == n:
        kN = params.kappaN
        qN = params.qN
        head = alpha[:-1]
        if alpha[-1] == "+":
            return {head + "+": -1 / qN, head + "-": 1 / kN}
        return {head + "+": kN, head + "-": -qN}
    pair = alpha[i - 1: i + 1]
    if pair in ("++", "--"):
        return {}
    plus_minus = alpha[: i - 1] + "+-" + alpha[i + 1:]
    minus_plus = alpha[: i - 1] + "-+" + alpha[i + 1:]
    if pair == "+-":
        return {plus_minus: -1 / q, minus_plus: q.field.one}
    return {plus_minus: q.field.one, minus_plus: -q}


def apply_e_vector(params: ParameterSet, i: int, vector: Mapping[BinaryString, FracElement]) -> Vector:
    """e_i applied to a sparse vector in the standard basis."""
    if not vector:
        return {}
    n = len(next(iter(vector)))
    if not 0 <= i <= n:
        raise UsageError(f"generator index {i} outside 0..{n}")
    out: Vector = {}
    for alpha, coeff in vector.items():
        for beta, value in _site_images(params, i, n, alpha).items():
            total = out.get(beta, coeff.field.zero) + coeff * value
            if total:
                out[beta] = total
            else:
                out.pop(beta, None)
    return out


def build_e(params: ParameterSet, i: int, n: int) -> DomainMatrix:
    """The matrix of e_i (0 <= i <= N)."""
    if not 0 <= i <= n:
        raise UsageError(f"generator index {i} outside 0..{n}")
    index = basis_index(n)
    dod: Dict[int, Dict[int, FracElement]] = {}
    for alpha, col in index.items():
        for beta, value in _site_images(params, i, n, alpha).items():
            dod.setdefault(index[beta], {})[col] = value
    return DomainMatrix.from_dod(dod, (2 ** n, 2 ** n), domain_of(_field_of(params)))


def identity(params: ParameterSet, n: int) -> DomainMatrix:
    return DomainMatrix.eye(2 ** n, domain_of(_field_of(params)))


def _combine(params: ParameterSet, n: int, scalar: FracElement, e_coeff: FracElement, e: DomainMatrix) -> DomainMatrix:
    return identity(params, n).scalarmul(scalar).add(e.scalarmul(e_coeff))


def build_R(params: ParameterSet, i: int, z: FracElement, n: int) -> DomainMatrix:
    """R_i(z) = ((qz - q^-1) + (z - 1) e_i) / (q - q^-1 z), for 1 <= i <= N-1."""
    if not 1 <= i < n:
        raise UsageError(f"R-matrix index {i} outside 1..{n - 1}")
    q = params.q
    denom = q - z / q
    return _combine(params, n, (q * z - 1 / q) / denom, (z - 1) / denom, build_e(params, i, n))


def _reflection_coefficients(q_b: FracElement, upper: FracElement, lower_inv: FracElement, x: FracElement):
    """Scalar and e coefficients of a K-matrix with argument x.

    ``upper`` and ``lower_inv`` are q_b*zeta and q_b/zeta.
    """
    denom = (1 + upper * x) * (1 - lower_inv * x)
    scalar = (x + upper) * (x - lower_inv) / denom
    return scalar, q_b * (x * x - 1) / denom


def build_KN(params: ParameterSet, z: FracElement, n: int) -> DomainMatrix:
    qN, zN = params.qN, params.zetaN
    scalar, e_coeff = _reflection_coefficients(qN, qN * zN, qN / zN, z)
    return _combine(params, n, scalar, e_coeff, build_e(params, n, n))


def build_K0(params: ParameterSet, z: FracElement, n: int) -> DomainMatrix:
    q0, z0 = params.q0, params.zeta0
    scalar, e_coeff = _reflection_coefficients(q0, q0 * z0, q0 / z0, 1 / z)
    return _combine(params, n, scalar, e_coeff, build_e(params, 0, n))


def build_K0_shifted(params: ParameterSet, z: FracElement, n: int) -> DomainMatrix:
    """K_0(z/s), written through s^2 and s*zeta0 so it also works in the reduced frame."""
    q0 = params.q0
    S, upper, lower = params.s_squared, params.s_zeta0, params.s_over_zeta0
    x_inv = 1 / z
    denom = (1 + q0 * upper * x_inv) * (1 - q0 * lower * x_inv)
    scalar = (S * x_inv * x_inv + q0 * (upper - lower) * x_inv - q0 * q0) / denom
    e_coeff = q0 * (S * x_inv * x_inv - 1) / denom
    return _combine(params, n, scalar, e_coeff, build_e(params, 0, n))


def product(matrices: List[DomainMatrix]) -> DomainMatrix:
    result = matrices[0]
    for m in matrices[1:]:
        result = result.matmul(m)
    return result


def same(a: DomainMatrix, b: DomainMatrix) -> bool:
    diff = a.sub(b)
    return all(vanishes(value) for row in diff.to_dod().values() for value in row.values())


def i_j_words(n: int) -> Tuple[List[int], List[int]]:
    """Generator indices of the products I_N and J_N."""
    if n % 2 == 0:
        return list(range(1, n, 2)), [0] + list(range(2, n - 1, 2)) + [n]
    return [0] + list(range(2, n, 2)), list(range(1, n - 1, 2)) + [n]


def i_j_alpha(params: ParameterSet, n: int) -> FracElement:
    """The scalar alpha with I J I = alpha I, by parity of N."""
    q, q0, qN, k0, kN = params.q, params.q0, params.qN, params.kappa0, params.kappaN
    if n % 2:
        return (1 / kN + k0 * q0 / qN) * (1 / k0 + kN * qN / q0)
    return (k0 / qN - q0 / (kN * q)) * (kN * qN - q / (k0 * q0))


def check_tl_relations(params: ParameterSet, n: int) -> Report:
    """Every defining relation of the algebra as an exact matrix identity."""
    if n < 2:
        raise UsageError("the Temperley-Lieb relations need N >= 2")
    e = [build_e(params, i, n) for i in range(n + 1)]
    q = params.q
    report: Report = []
    for i in range(n + 1):
        q_i = params.q_at(i, n)
        report.append((f"quadratic[{i}]", same(e[i].matmul(e[i]), e[i].scalarmul(-(q_i + 1 / q_i)))))
    for i in range(1, n):
        for j in (i - 1, i + 1):
            if 1 <= j <= n - 1:
                report.append((f"tl[{i},{j}]", same(product([e[i], e[j], e[i]]), e[i])))
    boundary = [(1, 0, params.q0, params.kappa0), (n - 1, n, params.qN, params.kappaN)]
    for i, j, q_b, kappa in boundary:
        constant = q / q_b + q_b / q
        lhs = product([e[i], e[j], e[i]])
        report.append((f"tl[{i},{j}]", same(lhs, e[i].scalarmul(constant))))
        report.append((f"{INFO_PREFIX}tl-kappa[{i},{j}]", same(lhs, e[i].scalarmul(kappa * constant))))
    for i in range(n + 1):
        for j in range(i + 2, n + 1):
            report.append((f"commute[{i},{j}]", same(e[i].matmul(e[j]), e[j].matmul(e[i]))))
    i_word, j_word = i_j_words(n)
    big_i = product([e[k] for k in i_word])
    big_j = product([e[k] for k in j_word])
    alpha = i_j_alpha(params, n)
    report.append(("IJI", same(product([big_i, big_j, big_i]), big_i.scalarmul(alpha))))
    report.append(("JIJ", same(product([big_j, big_i, big_j]), big_j.scalarmul(alpha))))
    report.extend(check_hecke_quotient(params, n, e))
    logger.debug("checked %d Temperley-Lieb relations at N=%d", len(report), n)
    return report


def check_hecke_quotient(params: ParameterSet, n: int, e: Optional[List[DomainMatrix]] = None) -> Report:
    """T_i = e_i + q_i^{-1} satisfies the finite-type Hecke relations of T_0..T_N."""
    e = e or [build_e(params, i, n) for i in range(n + 1)]
    one = identity(params, n)
    t = [e[i].add(one.scalarmul(1 / params.q_at(i, n))) for i in range(n + 1)]
    report: Report = []
    for i in range(n + 1):
        q_i = params.q_at(i, n)
        lhs = t[i].matmul(t[i]).add(t[i].scalarmul(q_i - 1 / q_i))
        report.append((f"hecke-quadratic[{i}]", same(lhs, one)))
    for i in range(1, n - 1):
        report.append((
            f"hecke-braid[{i},{i + 1}]",
            same(product([t[i], t[i + 1], t[i]]), product([t[i + 1], t[i], t[i + 1]])),
        ))
    for a, b in ((0, 1), (n, n - 1)):
        report.append((
            f"hecke-braid[{a},{b}]",
            same(product([t[a], t[b], t[a], t[b]]), product([t[b], t[a], t[b], t[a]])),
        ))
    for i in range(n + 1):
        for j in range(i + 2, n + 1):
            report.append((f"hecke-commute[{i},{j}]", same(t[i].matmul(t[j]), t[j].matmul(t[i]))))
    return report


def check_ybe_reflection(params: ParameterSet, n: int) -> Report:
    """Yang-Baxter, reflection and unitarity identities in independent symbols u, w."""
    if n < 2:
        raise UsageError("the reflection equations need N >= 2")
    params = params.lift()
    u, w = FIELD_GENS["u"], FIELD_GENS["w"]
    one = identity(params, n)
    R = lambda i, z: build_R(params, i, z, n)
    KN = lambda z: build_KN(params, z, n)
    K0 = lambda z: build_K0(params, z, n)
    report: Report = []
    for i in range(1, n):
        report.append((f"unitarity-R[{i}]", same(R(i, u).matmul(R(i, 1 / u)), one)))
    report.append(("unitarity-K0", same(K0(u).matmul(K0(1 / u)), one)))
    report.append(("unitarity-KN", same(KN(u).matmul(KN(1 / u)), one)))
    for i in range(1, n - 1):
        lhs = product([R(i, u), R(i + 1, u * w), R(i, w)])
        rhs = product([R(i + 1, w), R(i, u * w), R(i + 1, u)])
        report.append((f"ybe[{i},{i + 1}]", same(lhs, rhs)))
    m = n - 1
    lhs = product([KN(w), R(m, 1 / (u * w)), KN(u), R(m, w / u)])
    rhs = product([R(m, w / u), KN(u), R(m, 1 / (u * w)), KN(w)])
    report.append(("reflection-N", same(lhs, rhs)))
    lhs = product([K0(u), R(1, u * w), K0(w), R(1, w / u)])
    rhs = product([R(1, w / u), K0(w), R(1, u * w), K0(u)])
    report.append(("reflection-0", same(lhs, rhs)))
    logger.debug("checked %d spectral identities at N=%d", len(report), n)
    return report


def ensure_tl_relations(params: ParameterSet, n: int) -> Report:
    return ensure(check_tl_relations(params, n), RelationFailed)


def ensure_ybe_reflection(params: ParameterSet, n: int) -> Report:
    return ensure(check_ybe_reflection(params, n), IdentityFailed)


def matrix_vector(matrix: DomainMatrix, vector: Mapping[BinaryString, FracElement], n: int) -> Vector:
    """Apply a matrix to a sparse vector; the result uses the matrix domain."""
    index = basis_index(n)
    strings = all_strings(n)
    column = {index[alpha]: {0: value} for alpha, value in vector.items() if value}
    col = DomainMatrix.from_dod(column, (2 ** n, 1), matrix.domain)
    out = matrix.matmul(col).to_dod()
    return {strings[row]: entries[0] for row, entries in out.items()}
