"""Sparse Laurent polynomials in z_1..z_N over the parameter field.

A polynomial is a dict from exponent tuples to nonzero ``PARAMS`` elements.
The module also holds the triangularity order used for Koornwinder
polynomials: dominance on Z^N and the partial order that compares dominant
representatives first.
"""
import logging
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

from sympy.polys.fields import FracElement

from .errors import AmbiguousLeading, NonPolynomialResult, UsageError
from .field import FIELD, PARAMS, Substitution, from_json, power, substitute, to_json, transfer_poly

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, FracElement]

LESS, EQUAL, GREATER, INCOMPARABLE = "less", "equal", "greater", "incomparable"


def dominant(weight: Iterable[int]) -> Exponent:
    """Dominant representative for the hyperoctahedral group: sorted absolute values."""
    return tuple(sorted((abs(x) for x in weight), reverse=True))


def dominates(lam: Exponent, mu: Exponent) -> bool:
    """True if lam - mu has all prefix sums nonnegative."""
    total = 0
    for a, b in zip(lam, mu):
        total += a - b
        if total < 0:
            return False
    return True


def compare(lam: Exponent, mu: Exponent) -> str:
    """Compare two weights in the Koornwinder order.

    Dominant representatives are compared first; weights in the same orbit
    are then compared by dominance. Incomparable pairs stay incomparable.
    """
    if lam == mu:
        return EQUAL
    lam_plus, mu_plus = dominant(lam), dominant(mu)
    if lam_plus != mu_plus:
        lo, hi = (lam_plus, mu_plus)
    else:
        lo, hi = (lam, mu)
    if dominates(hi, lo):
        return LESS
    if dominates(lo, hi):
        return GREATER
    return INCOMPARABLE


def precedes(mu: Exponent, lam: Exponent) -> bool:
    """mu is at most lam in the Koornwinder order."""
    return compare(mu, lam) in (LESS, EQUAL)


def order_key(mu: Exponent) -> Tuple[int, int]:
    """A linear extension of the Koornwinder order."""
    def prefix_total(v):
        total = running = 0
        for x in v:
            running += x
            total += running
        return total

    return prefix_total(dominant(mu)), prefix_total(mu)


def _scalar(value: Scalar) -> FracElement:
    if isinstance(value, FracElement):
        return value
    return PARAMS(value)


class LaurentPoly:
    """Sparse Laurent polynomial with parameter-field coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Exponent, FracElement]] = None):
        self.n = n
        self.terms: Dict[Exponent, FracElement] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != n:
                raise UsageError(f"exponent {exp} does not have length {n}")
            if coeff:
                self.terms[tuple(exp)] = coeff

    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "LaurentPoly":
        return cls(n, {(0,) * n: PARAMS.one})

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff: Scalar = 1) -> "LaurentPoly":
        exp = tuple(exp)
        return cls(len(exp), {exp: _scalar(coeff)})

    @classmethod
    def variable(cls, n: int, i: int) -> "LaurentPoly":
        """z_i as a polynomial in n variables (1-based)."""
        exp = [0] * n
        exp[i - 1] = 1
        return cls.monomial(exp)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exponent, FracElement]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"LaurentPoly(n={self.n}, terms={len(self.terms)})"

    def _check(self, other: "LaurentPoly"):
        if other.n != self.n:
            raise UsageError(f"mismatched variable counts {self.n} and {other.n}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            total = terms.get(exp, PARAMS.zero) + coeff
            if total:
                terms[exp] = total
            else:
                terms.pop(exp, None)
        result = LaurentPoly(self.n)
        result.terms = terms
        return result

    def __neg__(self) -> "LaurentPoly":
        result = LaurentPoly(self.n)
        result.terms = {exp: -coeff for exp, coeff in self.terms.items()}
        return result

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def scale(self, factor: Scalar) -> "LaurentPoly":
        factor = _scalar(factor)
        if not factor:
            return LaurentPoly(self.n)
        result = LaurentPoly(self.n)
        result.terms = {exp: coeff * factor for exp, coeff in self.terms.items()}
        return result

    def __mul__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        self._check(other)
        terms: Dict[Exponent, FracElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                total = terms.get(exp, PARAMS.zero) + c1 * c2
                if total:
                    terms[exp] = total
                else:
                    terms.pop(exp, None)
        result = LaurentPoly(self.n)
        result.terms = terms
        return result

    __rmul__ = __mul__

    def extract(self, exp: Iterable[int]) -> FracElement:
        """Coefficient of z^exp."""
        return self.terms.get(tuple(exp), PARAMS.zero)

    def support(self):
        return list(self.terms)

    def leading_term(self) -> Tuple[Exponent, FracElement]:
        """The unique maximal term for the Koornwinder order."""
        if not self.terms:
            raise AmbiguousLeading("the zero polynomial has no leading term")
        support = list(self.terms)
        maximal = [m for m in support if not any(compare(m, other) == LESS for other in support)]
        if len(maximal) != 1:
            raise AmbiguousLeading(f"maximal support elements {sorted(maximal)} are incomparable")
        return maximal[0], self.terms[maximal[0]]

    def map_terms(self, fn) -> "LaurentPoly":
        """Rebuild from ``fn(exp, coeff) -> (exp, coeff)``, collecting equal exponents."""
        terms: Dict[Exponent, FracElement] = {}
        for exp, coeff in self.terms.items():
            new_exp, new_coeff = fn(exp, coeff)
            total = terms.get(new_exp, PARAMS.zero) + new_coeff
            if total:
                terms[new_exp] = total
            else:
                terms.pop(new_exp, None)
        result = LaurentPoly(self.n)
        result.terms = terms
        return result

    def weyl_substitute(self, i: int, s_squared: FracElement) -> "LaurentPoly":
        """Apply s_i: swap z_i, z_{i+1}; invert z_N; or z_1 -> s^2/z_1 for i = 0."""
        n = self.n
        if not 0 <= i <= n:
            raise UsageError(f"generator index {i} outside 0..{n}")
        if i == 0:
            return self.map_terms(lambda e, c: ((-e[0],) + e[1:], c * power(s_squared, e[0])))
        if i == n:
            return self.map_terms(lambda e, c: (e[:-1] + (-e[-1],), c))
        return self.map_terms(lambda e, c: (e[: i - 1] + (e[i], e[i - 1]) + e[i + 1:], c))

    def monomial_substitute(self, j: int, coeff: FracElement, exps: Iterable[int]) -> "LaurentPoly":
        """Replace z_j by coeff * z^exps (z_j itself may appear in exps)."""
        exps = tuple(exps)
        idx = j - 1

        def move(e, c):
            k = e[idx]
            base = list(e)
            base[idx] = 0
            return tuple(b + k * v for b, v in zip(base, exps)), c * power(coeff, k)

        return self.map_terms(move)

    def substitute(self, sub: Substitution) -> "LaurentPoly":
        """Apply a parameter substitution coefficientwise."""
        result = LaurentPoly(self.n)
        result.terms = {}
        for exp, coeff in self.terms.items():
            image = substitute(coeff, sub)
            if image:
                result.terms[exp] = image
        return result

    def max_level(self, direction: Exponent) -> int:
        return max(sum(a * b for a, b in zip(exp, direction)) for exp in self.terms)

    def divide_binomial(self, coeff: FracElement, shift: Exponent) -> "LaurentPoly":
        """Exact quotient by (1 - coeff * z^shift)."""
        if not self.terms:
            return LaurentPoly(self.n)
        norm = sum(x * x for x in shift)
        level = lambda e: sum(a * b for a, b in zip(e, shift))
        ceiling = self.max_level(shift) - norm
        remainder = dict(self.terms)
        quotient: Dict[Exponent, FracElement] = {}
        while remainder:
            low = min(level(e) for e in remainder)
            if low > ceiling:
                raise NonPolynomialResult(f"division by 1 - c*z^{shift} left a remainder")
            for exp in [e for e in remainder if level(e) == low]:
                value = remainder.pop(exp)
                quotient[exp] = value
                target = tuple(a + b for a, b in zip(exp, shift))
                total = remainder.get(target, PARAMS.zero) + coeff * value
                if total:
                    remainder[target] = total
                else:
                    remainder.pop(target, None)
        result = LaurentPoly(self.n)
        result.terms = quotient
        return result

    def to_field(self):
        """The polynomial as a single element of ``FIELD``."""
        if not self.terms:
            return FIELD.zero
        ring = PARAMS.ring
        denom = ring.one
        for coeff in self.terms.values():
            denom = denom.lcm(coeff.denom)
        shift = [min(0, min(e[k] for e in self.terms)) for k in range(self.n)]
        z_index = _z_positions(self.n)
        field_ring = FIELD.ring
        numer: Dict[Tuple[int, ...], int] = {}
        for exp, coeff in self.terms.items():
            part = transfer_poly(coeff.numer * denom.exquo(coeff.denom), FIELD)
            for monom, c in part.items():
                full = list(monom)
                for k in range(self.n):
                    full[z_index[k]] += exp[k] - shift[k]
                key = tuple(full)
                total = numer.get(key, 0) + c
                if total:
                    numer[key] = total
                else:
                    numer.pop(key, None)
        z_denom = [0] * FIELD.ngens
        for k in range(self.n):
            z_denom[z_index[k]] = -shift[k]
        denominator = transfer_poly(denom, FIELD) * field_ring.from_dict({tuple(z_denom): 1})
        return FIELD.new(field_ring.from_dict(numer), denominator)

    @classmethod
    def from_field(cls, element, n: int) -> "LaurentPoly":
        """Split a ``FIELD`` element into a Laurent polynomial in z_1..z_n."""
        z_index = _z_positions(n)
        z_part = None
        param_denom = {}
        for monom, c in element.denom.items():
            zs = tuple(monom[k] for k in z_index)
            if z_part is None:
                z_part = zs
            elif zs != z_part:
                raise NonPolynomialResult("denominator depends on the positions")
            rest = list(monom)
            for k in z_index:
                rest[k] = 0
            param_denom[tuple(rest)] = c
        denom = transfer_poly(FIELD.ring.from_dict(param_denom), PARAMS)
        grouped: Dict[Exponent, Dict[Tuple[int, ...], int]] = {}
        for monom, c in element.numer.items():
            exp = tuple(monom[z_index[k]] - z_part[k] for k in range(n))
            rest = list(monom)
            for k in z_index:
                rest[k] = 0
            grouped.setdefault(exp, {})[tuple(rest)] = c
        terms = {
            exp: PARAMS.new(transfer_poly(FIELD.ring.from_dict(part), PARAMS), denom)
            for exp, part in grouped.items()
        }
        return cls(n, terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(exp), "coeff": to_json(self.terms[exp])} for exp in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        return cls(
            data["n"], {tuple(term["exp"]): from_json(term["coeff"]) for term in data["terms"]}
        )


def _z_positions(n: int) -> Tuple[int, ...]:
    names = [str(sym) for sym in FIELD.symbols]
    return tuple(names.index(f"z{k}") for k in range(1, n + 1))


def linear_combination(n: int, pairs: Iterable[Tuple[Scalar, LaurentPoly]]) -> LaurentPoly:
    """Sum of coeff * poly, accumulated in place."""
    terms: Dict[Exponent, FracElement] = {}
    for coeff, poly in pairs:
        coeff = _scalar(coeff)
        if not coeff:
            continue
        for exp, value in poly.terms.items():
            total = terms.get(exp, PARAMS.zero) + coeff * value
            if total:
                terms[exp] = total
            else:
                terms.pop(exp, None)
    result = LaurentPoly(n)
    result.terms = terms
    return result


def random_laurent(n: int, rng, terms: int = 3, bound: int = 2) -> LaurentPoly:
    """Small random Laurent polynomial with integer coefficients."""
    pairs = []
    for _ in range(terms):
        exp = tuple(rng.randint(-bound, bound) for _ in range(n))
        pairs.append((rng.choice([-3, -2, -1, 1, 2, 3]), LaurentPoly.monomial(exp)))
    return linear_combination(n, pairs)
