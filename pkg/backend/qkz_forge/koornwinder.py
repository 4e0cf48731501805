"""Non-symmetric Koornwinder polynomials and their specializations."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy.polys.fields import FracElement

from .errors import (
    NotInSpan,
    SolveAmbiguous,
    SpecializationPole,
    SubstitutionPole,
    UsageError,
    VerifyFailed,
)
from .field import PARAM_GENS, PARAMS, ParameterSet, Substitution, power, substitute, to_json
from .hecke import apply_Y, intertwiner, y_eigenvalue, y_eigenvalues
from .laurent import Exponent, LaurentPoly, dominant, dominates, linear_combination, order_key, precedes
from .weyl import (
    ONE_BOUNDARY,
    TWO_BOUNDARY,
    Weight,
    build_gamma,
    nu,
    orbit,
    specialization_pair,
    weight_act,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KoornwinderPoly:
    """Monic simultaneous eigenfunction E_lam with its eigenvalues."""

    weight: Weight
    poly: LaurentPoly
    eigenvalues: Tuple[FracElement, ...]

    def to_json(self) -> dict:
        return {
            "lambda": list(self.weight),
            "poly": self.poly.to_json(),
            "eigenvalues": [to_json(y) for y in self.eigenvalues],
        }


def _dominant_below(lam_plus: Weight) -> List[Weight]:
    """Dominant weights mu+ with mu+ <= lam+ in dominance."""
    n = len(lam_plus)
    bound = max(lam_plus) if lam_plus else 0
    out: List[Weight] = []

    def extend(prefix: List[int], cap: int):
        if len(prefix) == n:
            mu = tuple(prefix)
            if dominates(lam_plus, mu):
                out.append(mu)
            return
        for x in range(cap, -1, -1):
            prefix.append(x)
            if dominates(lam_plus[: len(prefix)], tuple(prefix)):
                extend(prefix, x)
            prefix.pop()

    extend([], bound)
    return out


def support_candidates(lam: Weight) -> List[Weight]:
    """All mu with mu preceding lam, highest first in a linear extension."""
    lam = tuple(lam)
    candidates = [
        mu
        for mu_plus in _dominant_below(dominant(lam))
        for mu in orbit(mu_plus)
        if precedes(mu, lam)
    ]
    return sorted(candidates, key=lambda mu: (order_key(mu), mu), reverse=True)


@lru_cache(maxsize=None)
def _Y_monomial(params: ParameterSet, n: int, i: int, exp: Exponent) -> LaurentPoly:
    return apply_Y(params, i, LaurentPoly.monomial(exp))


@lru_cache(maxsize=None)
def compute_E(params: ParameterSet, lam: Weight) -> KoornwinderPoly:
    """Triangular solve for E_lam against the combined operator sum_i 2^{i-1} Y_i."""
    lam = tuple(lam)
    n = len(lam)
    candidates = support_candidates(lam)
    if candidates[0] != lam:
        raise SolveAmbiguous(f"{lam} is not the top candidate")
    weights = [2 ** (i - 1) for i in range(1, n + 1)]
    target = y_eigenvalues(params, lam)
    big_lambda = sum((w * y for w, y in zip(weights, target)), PARAMS.zero)

    coeffs: Dict[Exponent, FracElement] = {}
    images = [LaurentPoly(n) for _ in range(n)]
    for mu in candidates:
        if mu == lam:
            c = PARAMS.one
        else:
            pending = sum((w * images[i].extract(mu) for i, w in enumerate(weights)), PARAMS.zero)
            if not pending:
                continue
            diagonal = sum((w * y for w, y in zip(weights, y_eigenvalues(params, mu))), PARAMS.zero)
            gap = big_lambda - diagonal
            if not gap:
                raise SolveAmbiguous(f"eigenvalue of {mu} coincides with that of {lam}")
            c = pending / gap
        coeffs[mu] = c
        for i in range(n):
            images[i] = images[i] + _Y_monomial(params, n, i + 1, mu).scale(c)

    poly = LaurentPoly(n, coeffs)
    for i in range(n):
        if images[i] != poly.scale(target[i]):
            raise VerifyFailed(f"Y_{i + 1} eigen-equation fails for E_{lam}")
    if poly.extract(lam) != PARAMS.one:
        raise VerifyFailed(f"E_{lam} is not monic")
    logger.debug("E_%s: %d candidates, %d terms", lam, len(candidates), len(poly))
    return KoornwinderPoly(lam, poly, tuple(target))


def intertwiner_check(params: ParameterSet, lam: Weight, i: int) -> bool:
    """phi_i E_lam / c agrees with the directly solved E_{s_i lam}."""
    lam = tuple(lam)
    image, c = intertwiner(params, i, compute_E(params, lam).poly, lam)
    if not c:
        return not image
    return image.scale(1 / c) == compute_E(params, weight_act(i, lam)).poly


@dataclass(frozen=True)
class SpecDescriptor:
    """Which specialization to apply, and the data it depends on.

    Two-boundary: s -> p^2, q -> branch * p^{-r}, with qN -> q^M first for the
    BI basis, and kappa0 eliminated by the constraint of the chosen sign.
    One-boundary (reduced frame, odd r): s^2 -> -t^{-6}, q -> -t^{2r}, qN -> t^r.
    """

    case: str
    n: int
    r: int = 1
    j: int = 1
    sign: str = "+"
    branch: int = 1
    bi_m: Optional[int] = None

    def __post_init__(self):
        specialization_pair(self.case, self.r)
        if self.branch not in (1, -1):
            raise UsageError("the branch must be +1 or -1")
        if self.case == ONE_BOUNDARY and self.r % 2 == 0:
            raise UsageError("the one-boundary specialization is rational only for odd r")

    @property
    def frame(self) -> str:
        return "reduced" if self.case == ONE_BOUNDARY else "standard"

    def generic_params(self) -> ParameterSet:
        return ParameterSet.generic(self.frame)

    def constraint(self) -> FracElement:
        """kappa0 * kappaN as a function of the remaining parameters (generic)."""
        generic = ParameterSet.generic()
        top = nu(self.n, self.r, self.j, self.sign)
        return y_eigenvalue(generic, top, 1) * power(generic.q, self.n - 1)

    def substitution(self) -> Substitution:
        g = PARAM_GENS
        if self.case == ONE_BOUNDARY:
            return Substitution.of({
                "s": -power(g["t"], -6),
                "q": -power(g["t"], 2 * self.r),
                "qN": power(g["t"], self.r),
            })
        q_image = self.branch * power(g["p"], -self.r)
        images = {"s": g["p"] ** 2, "q": q_image}
        if self.bi_m is not None:
            images["qN"] = power(q_image, self.bi_m)
        base = Substitution.of(images)
        images["kappa0"] = substitute(self.constraint(), base) / g["kappaN"]
        return Substitution.of(images)

    def params(self) -> ParameterSet:
        return self.generic_params().substitute(self.substitution())

    def describe(self) -> Dict[str, Dict[str, str]]:
        return {name: to_json(value) for name, value in self.substitution().images}


def specialize_E(e: KoornwinderPoly, spec: SpecDescriptor) -> LaurentPoly:
    try:
        return e.poly.substitute(spec.substitution())
    except SubstitutionPole as exc:
        raise SpecializationPole(f"E_{e.weight} is singular at the specialization: {exc}") from exc


def build_span(mu: Weight, case: str, r: int) -> List[Weight]:
    """Weights of the connected admissible component of mu (nonnegative part for one-boundary)."""
    k, r_prime = specialization_pair(case, r)
    vertices = build_gamma(tuple(mu), k, r_prime).vertices
    if case == ONE_BOUNDARY:
        vertices = [v for v in vertices if min(v) >= 0]
    return sorted(vertices, key=lambda v: (order_key(v), v), reverse=True)


def expand_in_basis(f: LaurentPoly, basis: Dict[Weight, LaurentPoly]) -> Dict[Weight, FracElement]:
    """Coefficients of f in a family of monic triangular polynomials, by peeling."""
    remainder = f
    out: Dict[Weight, FracElement] = {}
    while remainder:
        top = max(remainder.terms, key=lambda m: (order_key(m), m))
        if top not in basis:
            raise NotInSpan(f"monomial {top} has no basis polynomial")
        c = remainder.terms[top]
        out[top] = c
        remainder = linear_combination(f.n, [(1, remainder), (-c, basis[top])])
    return out


def specialized_basis(params: ParameterSet, weights: List[Weight], spec: SpecDescriptor) -> Dict[Weight, LaurentPoly]:
    return {lam: specialize_E(compute_E(params, lam), spec) for lam in weights}


def koornwinder_for(case: str, n: int, r: int, lam: Weight) -> KoornwinderPoly:
    """E_lam at generic parameters in the frame the boundary case works in."""
    frame = "reduced" if case == ONE_BOUNDARY else "standard"
    return compute_E(ParameterSet.generic(frame), tuple(lam))


__all__ = [
    "KoornwinderPoly",
    "SpecDescriptor",
    "TWO_BOUNDARY",
    "ONE_BOUNDARY",
    "build_span",
    "compute_E",
    "expand_in_basis",
    "intertwiner_check",
    "koornwinder_for",
    "specialize_E",
    "specialized_basis",
    "support_candidates",
]
