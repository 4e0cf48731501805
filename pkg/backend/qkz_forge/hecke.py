"""Polynomial representation of the affine Hecke algebra of type C.

The Noumi operators T_0..T_N act on Laurent polynomials. Each operator is
evaluated on single monomials (cached) and extended linearly; the rational
factor is handled by exact division by its denominator binomial.
"""
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement

from .config import settings
from .errors import DegenerateEigenvalue, UsageError
from .field import PARAMS, ParameterSet, power
from .laurent import Exponent, LaurentPoly, linear_combination, random_laurent
from .weyl import Weight, weight_act, weight_data

logger = logging.getLogger(__name__)

BOUNDARY_PARAM, UNIFORM_Q = "boundary-param", "uniform-q"
OPS = ("T", "Tinv", "E", "Y", "Yinv", "Phi")


@dataclass(frozen=True)
class Letter:
    """One operator in a word: kind and generator index."""

    op: str
    i: int

    def to_json(self) -> dict:
        return {"op": self.op, "i": self.i}


def _unit(n: int, k: int, value: int = 1) -> Exponent:
    exp = [0] * n
    exp[k - 1] = value
    return tuple(exp)


def _boundary_data(params: ParameterSet, n: int, i: int):
    """Numerator polynomial and denominator binomial (coeff, shift) of T_i."""
    q = params.q
    if i == 0:
        S = params.s_squared
        numer = LaurentPoly(n, {
            (0,) * n: PARAMS.one,
            _unit(n, 1, -1): params.q0 * (params.s_zeta0 - params.s_over_zeta0),
            _unit(n, 1, -2): -params.q0 ** 2 * S,
        })
        return numer, S, _unit(n, 1, -2)
    if i == n:
        zN = params.zetaN
        numer = LaurentPoly(n, {
            (0,) * n: PARAMS.one,
            _unit(n, n, 1): params.qN * (zN - 1 / zN),
            _unit(n, n, 2): -params.qN ** 2,
        })
        return numer, PARAMS.one, _unit(n, n, 2)
    shift = tuple(1 if k == i - 1 else -1 if k == i else 0 for k in range(n))
    numer = LaurentPoly(n, {(0,) * n: PARAMS.one, shift: -q ** 2})
    return numer, PARAMS.one, shift


@lru_cache(maxsize=None)
def _T_monomial(params: ParameterSet, n: int, i: int, exp: Exponent) -> LaurentPoly:
    q_i = params.q_at(i, n)
    f = LaurentPoly.monomial(exp)
    moved = f.weyl_substitute(i, params.s_squared) - f
    if not moved:
        return f.scale(-q_i)
    numer, coeff, shift = _boundary_data(params, n, i)
    quotient = moved.divide_binomial(coeff, shift)
    return linear_combination(n, [(-q_i, f), (-1 / q_i, numer * quotient)])


def apply_T(params: ParameterSet, i: int, f: LaurentPoly) -> LaurentPoly:
    """Noumi operator T_i on f (0 <= i <= N)."""
    n = f.n
    if not 0 <= i <= n:
        raise UsageError(f"generator index {i} outside 0..{n}")
    return linear_combination(n, ((coeff, _T_monomial(params, n, i, exp)) for exp, coeff in f))


def apply_Tinv(params: ParameterSet, i: int, f: LaurentPoly) -> LaurentPoly:
    """T_i^{-1} = T_i + (q_i - q_i^{-1}) from the quadratic relation."""
    q_i = params.q_at(i, f.n)
    return apply_T(params, i, f) + f.scale(q_i - 1 / q_i)


def e_shift(params: ParameterSet, i: int, n: int, convention: str = BOUNDARY_PARAM) -> FracElement:
    """The constant c in e_i = T_i - c."""
    if convention == BOUNDARY_PARAM:
        return 1 / params.q_at(i, n)
    if convention == UNIFORM_Q:
        return 1 / params.q
    raise UsageError(f"unknown e-hat convention: {convention}")


def apply_e(params: ParameterSet, i: int, f: LaurentPoly, convention: Optional[str] = None) -> LaurentPoly:
    convention = convention or settings.ehat_convention
    return apply_T(params, i, f) - f.scale(e_shift(params, i, f.n, convention))


def y_word(i: int, n: int) -> List[Letter]:
    """Bernstein-Zelevinsky word T_i..T_{N-1} T_N T_{N-1}..T_1 T_0 T_1^{-1}..T_{i-1}^{-1}."""
    if not 1 <= i <= n:
        raise UsageError(f"Y index {i} outside 1..{n}")
    word = [Letter("T", k) for k in range(i, n)]
    word.append(Letter("T", n))
    word += [Letter("T", k) for k in range(n - 1, 0, -1)]
    word.append(Letter("T", 0))
    word += [Letter("Tinv", k) for k in range(1, i)]
    return word


def yinv_word(i: int, n: int) -> List[Letter]:
    inverse = {"T": "Tinv", "Tinv": "T"}
    return [Letter(inverse[letter.op], letter.i) for letter in reversed(y_word(i, n))]


def y_eigenvalue(params: ParameterSet, lam: Weight, i: int) -> FracElement:
    """s^{2 lam_i} q^{2 rho_i} (q0 qN)^{sigma_i}."""
    data = weight_data(lam)
    a = i - 1
    return (
        power(params.s_squared, lam[a])
        * power(params.q, 2 * data.rho[a])
        * power(params.q0 * params.qN, data.sigma[a])
    )


def y_eigenvalues(params: ParameterSet, lam: Weight) -> List[FracElement]:
    return [y_eigenvalue(params, lam, i) for i in range(1, len(lam) + 1)]


def _phi_shift(params: ParameterSet, i: int, lam: Weight) -> FracElement:
    n = len(lam)
    y = y_eigenvalues(params, lam)
    if i == n:
        denom = power(y[n - 1], -2) - 1
        if not denom:
            raise DegenerateEigenvalue(f"y_N^2 = 1 for weight {lam}")
        q0, qN = params.q0, params.qN
        return ((1 / qN - qN) + (1 / q0 - q0) / y[n - 1]) / denom
    if not 1 <= i < n:
        raise UsageError(f"intertwiner index {i} outside 1..{n}")
    denom = y[i] / y[i - 1] - 1
    if not denom:
        raise DegenerateEigenvalue(f"y_{i + 1} = y_{i} for weight {lam}")
    return (1 / params.q - params.q) / denom


def intertwiner(params: ParameterSet, i: int, e_lam: LaurentPoly, lam: Weight) -> Tuple[LaurentPoly, FracElement]:
    """phi_i E_lam and the coefficient c with phi_i E_lam = c E_{s_i lam}."""
    lam = tuple(lam)
    image = apply_T(params, i, e_lam) + e_lam.scale(_phi_shift(params, i, lam))
    return image, image.extract(weight_act(i, lam))


def apply_letter(params: ParameterSet, letter: Letter, f: LaurentPoly, convention: Optional[str] = None) -> LaurentPoly:
    if letter.op == "T":
        return apply_T(params, letter.i, f)
    if letter.op == "Tinv":
        return apply_Tinv(params, letter.i, f)
    if letter.op == "E":
        return apply_e(params, letter.i, f, convention)
    if letter.op == "Y":
        return apply_word(params, y_word(letter.i, f.n), f)
    if letter.op == "Yinv":
        return apply_word(params, yinv_word(letter.i, f.n), f)
    raise UsageError(f"operator {letter.op} needs a weight; use apply_word with weight=")


def apply_word(
    params: ParameterSet,
    word: Sequence[Letter],
    f: LaurentPoly,
    weight: Optional[Weight] = None,
    convention: Optional[str] = None,
) -> LaurentPoly:
    """Apply the operator product word[0] word[1] ... (rightmost letter first).

    ``Phi`` letters are allowed when f is an eigenfunction of weight ``weight``;
    the weight is updated as the word is applied.
    """
    result = f
    for letter in reversed(list(word)):
        if letter.op == "Phi":
            if weight is None:
                raise UsageError("Phi letters need the weight of the input eigenfunction")
            result, _ = intertwiner(params, letter.i, result, weight)
            weight = weight_act(letter.i, tuple(weight))
            continue
        result = apply_letter(params, letter, result, convention)
    return result


def apply_Y(params: ParameterSet, i: int, f: LaurentPoly) -> LaurentPoly:
    return apply_word(params, y_word(i, f.n), f)


def letters(spec: Iterable[Tuple[str, int]]) -> List[Letter]:
    out = []
    for op, i in spec:
        if op not in OPS:
            raise UsageError(f"unknown operator {op}")
        out.append(Letter(op, i))
    return out


def _relations(n: int) -> List[Tuple[str, List[Letter], List[Letter]]]:
    """Relation id with the two words that must agree."""
    T = lambda i: Letter("T", i)
    Y = lambda i: Letter("Y", i)
    rels = []
    for i in range(1, n):
        if i + 1 < n:
            rels.append((f"braid[{i},{i + 1}]", [T(i), T(i + 1), T(i)], [T(i + 1), T(i), T(i + 1)]))
    if n >= 2:
        rels.append(("braid[0,1]", [T(0), T(1), T(0), T(1)], [T(1), T(0), T(1), T(0)]))
        rels.append((f"braid[{n},{n - 1}]", [T(n), T(n - 1), T(n), T(n - 1)], [T(n - 1), T(n), T(n - 1), T(n)]))
    for i in range(0, n + 1):
        for j in range(i + 2, n + 1):
            rels.append((f"commute[{i},{j}]", [T(i), T(j)], [T(j), T(i)]))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rels.append((f"Y-commute[{i},{j}]", [Y(i), Y(j)], [Y(j), Y(i)]))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i < n and j not in (i, i + 1)) or (i == n and j != n):
                rels.append((f"TY-commute[{i},{j}]", [T(i), Y(j)], [Y(j), T(i)]))
    for i in range(1, n):
        rels.append((f"TYT[{i}]", [T(i), Y(i + 1), T(i)], [Y(i)]))
    return rels


def check_hecke_relations(
    params: ParameterSet, n: int, samples: int = 20, seed: Optional[int] = None
) -> List[Tuple[str, bool]]:
    """Verify the defining relations on random Laurent polynomials."""
    rng = random.Random(settings.seed if seed is None else seed)
    polys = [random_laurent(n, rng) for _ in range(samples)]
    report = []
    for i in range(0, n + 1):
        q_i = params.q_at(i, n)
        holds = all(
            not (apply_T(params, i, apply_T(params, i, f)) + apply_T(params, i, f).scale(q_i - 1 / q_i) - f)
            for f in polys
        )
        report.append((f"quadratic[{i}]", holds))
    for rel_id, left, right in _relations(n):
        holds = all(apply_word(params, left, f) == apply_word(params, right, f) for f in polys)
        report.append((rel_id, holds))
    q0 = params.q0
    holds = all(
        apply_word(params, [Letter("Tinv", n), Letter("Y", n)], f)
        == apply_word(params, [Letter("Yinv", n), Letter("T", n)], f) - f.scale(q0 - 1 / q0)
        for f in polys
    )
    report.append((f"TN-YN[{n}]", holds))
    logger.debug("checked %d Hecke relations on %d samples", len(report), samples)
    return report
