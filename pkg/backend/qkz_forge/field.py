"""Exact rational-function arithmetic over the integers.

Two sympy fraction fields carry every scalar in the engine:

* ``PARAMS`` holds the eight model parameters and the auxiliary
  specialization variables ``p`` and ``t``. Laurent polynomial coefficients,
  Kazhdan-Lusztig coefficients and Temperley-Lieb matrices live here.
* ``FIELD`` adds the position variables ``z1..z6`` and two spectral symbols
  ``u`` and ``w``. R- and K-matrices and the factorized qKZ checks live here.

Elements are sympy ``FracElement`` objects, which are kept in lowest terms
with a canonical denominator, so equality is mathematical equality.
"""
import logging
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple

from sympy import ZZ, sympify
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.orderings import grlex

from .config import settings
from .errors import DivisionByZero, SamplePole, SubstitutionPole, UnsupportedVariable, UsageError

logger = logging.getLogger(__name__)

PARAMETER_NAMES = ("q", "s", "q0", "qN", "zeta0", "zetaN", "kappa0", "kappaN")
MAX_POSITIONS = 6
POSITION_NAMES = tuple(f"z{i}" for i in range(1, MAX_POSITIONS + 1))

PARAMS, *_param_gens = field(",".join(PARAMETER_NAMES + ("p", "t")), ZZ, grlex)
FIELD, *_field_gens = field(",".join(PARAMETER_NAMES + POSITION_NAMES + ("p", "t", "u", "w")), ZZ, grlex)

PARAM_GENS: Dict[str, FracElement] = {str(sym): gen for sym, gen in zip(PARAMS.symbols, _param_gens)}
FIELD_GENS: Dict[str, FracElement] = {str(sym): gen for sym, gen in zip(FIELD.symbols, _field_gens)}

_FIELDS = {id(PARAMS): PARAM_GENS, id(FIELD): FIELD_GENS}

SAMPLE_RETRIES = 10


def gens_of(target: FracField) -> Dict[str, FracElement]:
    """Generators of one of the engine fields, keyed by name."""
    return _FIELDS[id(target)]


def position(i: int) -> FracElement:
    """The position variable z_i in ``FIELD`` (1-based)."""
    if not 1 <= i <= MAX_POSITIONS:
        raise UsageError(f"position index {i} outside 1..{MAX_POSITIONS}")
    return FIELD_GENS[f"z{i}"]


def arith(a: FracElement, b: FracElement, op: str) -> FracElement:
    """Apply ``op`` in {add, sub, mul, div} and return the reduced result."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("division by the zero element")
        return a / b
    raise UsageError(f"unknown field operation: {op}")


@lru_cache(maxsize=None)
def _positions(source: FracField, target: FracField) -> Tuple[Optional[int], ...]:
    names = [str(sym) for sym in target.symbols]
    return tuple(names.index(str(sym)) if str(sym) in names else None for sym in source.symbols)


def _move_poly(poly, positions, target_ring):
    terms = {}
    width = target_ring.ngens
    for monom, coeff in poly.items():
        exps = [0] * width
        for k, e in enumerate(monom):
            if not e:
                continue
            j = positions[k]
            if j is None:
                raise UnsupportedVariable(f"{poly.ring.symbols[k]} has no counterpart in the target field")
            exps[j] = e
        terms[tuple(exps)] = coeff
    return target_ring.from_dict(terms)


def transfer(a: FracElement, target: FracField) -> FracElement:
    """Move ``a`` into ``target`` by matching variable names."""
    if a.field == target:
        return a
    positions = _positions(a.field, target)
    return target.new(_move_poly(a.numer, positions, target.ring), _move_poly(a.denom, positions, target.ring))


def transfer_poly(poly, target: FracField):
    """Move a bare numerator polynomial into ``target``'s ring."""
    positions = _positions(poly.ring.to_field(), target)
    return _move_poly(poly, positions, target.ring)


@dataclass(frozen=True)
class Substitution:
    """Ring homomorphism given by variable images.

    Variables without an explicit image map to the same-named generator of
    ``target``; a variable with neither is unsupported.
    """

    images: Tuple[Tuple[str, FracElement], ...]
    target: FracField = PARAMS

    @classmethod
    def of(cls, images: Mapping[str, FracElement], target: FracField = PARAMS) -> "Substitution":
        return cls(tuple(sorted((name, transfer(value, target)) for name, value in images.items())), target)

    def image(self, name: str) -> Optional[FracElement]:
        for key, value in self.images:
            if key == name:
                return value
        return gens_of(self.target).get(name)

    def then(self, other: "Substitution") -> "Substitution":
        """Composite map: apply ``self`` first, then ``other``."""
        mapped = {name: substitute(value, other) for name, value in self.images}
        for name, value in other.images:
            mapped.setdefault(name, value)
        return Substitution.of(mapped, other.target)


def _monomial_image(value: FracElement):
    numer, denom = value.numer, value.denom
    if len(numer) != 1 or len(denom) != 1:
        return None
    (nm, nc), = numer.items()
    (dm, dc), = denom.items()
    if dc != 1 or nc not in (1, -1):
        return None
    return int(nc), tuple(a - b for a, b in zip(nm, dm))


@lru_cache(maxsize=None)
def _plan(sub: Substitution, source: FracField):
    plan = []
    for sym in source.symbols:
        value = sub.image(str(sym))
        if value is None:
            plan.append(None)
            continue
        mono = _monomial_image(value)
        plan.append(("mono", mono) if mono is not None else ("general", value))
    return tuple(plan)


def _apply_poly(poly, plan, target: FracField) -> FracElement:
    if all(step is None or step[0] == "mono" for step in plan):
        width = target.ngens
        laurent: Dict[Tuple[int, ...], int] = {}
        for monom, coeff in poly.items():
            exps = [0] * width
            sign = 1
            for k, e in enumerate(monom):
                if not e:
                    continue
                step = plan[k]
                if step is None:
                    raise UnsupportedVariable(f"no image for {poly.ring.symbols[k]}")
                unit, vector = step[1]
                if unit < 0 and e % 2:
                    sign = -sign
                for j, v in enumerate(vector):
                    exps[j] += e * v
            key = tuple(exps)
            total = laurent.get(key, 0) + sign * coeff
            if total:
                laurent[key] = total
            else:
                laurent.pop(key, None)
        if not laurent:
            return target.zero
        shift = [min(0, min(m[j] for m in laurent)) for j in range(width)]
        numer = target.ring.from_dict(
            {tuple(e - s for e, s in zip(m, shift)): c for m, c in laurent.items()}
        )
        denom = target.ring.from_dict({tuple(-s for s in shift): 1})
        return target.new(numer, denom)

    result = target.zero
    for monom, coeff in poly.items():
        term = target(coeff)
        for k, e in enumerate(monom):
            if not e:
                continue
            step = plan[k]
            if step is None:
                raise UnsupportedVariable(f"no image for {poly.ring.symbols[k]}")
            base = step[1]
            if step[0] == "mono":
                unit, vector = step[1]
                shift = [min(v, 0) for v in vector]
                base = target.new(
                    target.ring.from_dict({tuple(v - s for v, s in zip(vector, shift)): unit}),
                    target.ring.from_dict({tuple(-s for s in shift): 1}),
                )
            term = term * base**e
        result = result + term
    return result


def substitute(a: FracElement, sub: Substitution) -> FracElement:
    """Homomorphic image of ``a`` under ``sub``."""
    if not a:
        return sub.target.zero
    plan = _plan(sub, a.field)
    denom = _apply_poly(a.denom, plan, sub.target)
    if not denom:
        raise SubstitutionPole(f"denominator {a.denom} vanishes under the substitution")
    return _apply_poly(a.numer, plan, sub.target) / denom


_BAR_ALLOWED = ("q", "qN", "kappaN")


def bar_involute(a: FracElement) -> FracElement:
    """Bar involution q -> 1/q, qN -> 1/qN, kappaN fixed."""
    for monom in list(a.numer.keys()) + list(a.denom.keys()):
        for sym, e in zip(a.field.symbols, monom):
            if e and str(sym) not in _BAR_ALLOWED:
                raise UnsupportedVariable(f"bar involution is not defined on {sym}")
    gens = gens_of(a.field)
    return substitute(a, Substitution.of({"q": 1 / gens["q"], "qN": 1 / gens["qN"]}, a.field))


def probabilistic_zero_check(a: FracElement, trials: int, seed: int = 0) -> bool:
    """Evaluate ``a`` at random integer points; True if it vanished at all of them.

    Only a pre-filter. A True answer must be confirmed by the exact test.
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if not a:
        return True
    rng = random.Random(seed)
    ngens = a.field.ngens
    for _ in range(trials):
        for _attempt in range(SAMPLE_RETRIES):
            point = [rng.randint(2, 997) for _ in range(ngens)]
            if a.denom(*point) != 0:
                break
        else:
            raise SamplePole(f"no pole-free point after {SAMPLE_RETRIES} samples")
        if a.numer(*point) != 0:
            return False
    return True


def vanishes(a: FracElement, trials: Optional[int] = None, seed: Optional[int] = None) -> bool:
    """Zero test: the random-point pre-filter first, then the exact normal form."""
    trials = settings.trials if trials is None else trials
    if not probabilistic_zero_check(a, trials, settings.seed if seed is None else seed):
        return False
    return not a


def to_json(a: FracElement) -> Dict[str, str]:
    """Canonical {num, den} strings with ``^`` for powers."""
    return {"num": str(a.numer).replace("**", "^"), "den": str(a.denom).replace("**", "^")}


def from_json(data: Mapping[str, str], target: FracField = PARAMS) -> FracElement:
    """Parse the output of :func:`to_json` back into ``target``."""
    ring = target.ring
    names = {str(sym): sym for sym in target.symbols}
    numer = ring.from_expr(sympify(data["num"].replace("^", "**"), locals=names))
    denom = ring.from_expr(sympify(data["den"].replace("^", "**"), locals=names))
    if not denom:
        raise DivisionByZero("zero denominator in serialized element")
    return target.new(numer, denom)


@dataclass(frozen=True)
class ParameterSet:
    """Values of the model parameters used by every operator builder.

    In the ``reduced`` frame the slot ``s`` holds s^2 and ``zeta0`` holds
    s*zeta0; operators read them only through ``s_squared`` and ``s_zeta0``.
    """

    q: FracElement
    s: FracElement
    q0: FracElement
    qN: FracElement
    zeta0: FracElement
    zetaN: FracElement
    kappa0: FracElement
    kappaN: FracElement
    frame: str = "standard"

    @classmethod
    def generic(cls, frame: str = "standard") -> "ParameterSet":
        return cls(*(PARAM_GENS[name] for name in PARAMETER_NAMES), frame=frame)

    def values(self) -> Tuple[FracElement, ...]:
        return tuple(getattr(self, name) for name in PARAMETER_NAMES)

    @property
    def s_squared(self) -> FracElement:
        return self.s if self.frame == "reduced" else self.s * self.s

    @property
    def s_zeta0(self) -> FracElement:
        return self.zeta0 if self.frame == "reduced" else self.s * self.zeta0

    @property
    def s_over_zeta0(self) -> FracElement:
        return self.s_squared / self.s_zeta0

    def require_s(self) -> FracElement:
        if self.frame == "reduced":
            raise UsageError("s itself is not available in the reduced frame")
        return self.s

    def q_at(self, i: int, n: int) -> FracElement:
        """Hecke parameter of generator i: q0 at 0, qN at n, q in the bulk."""
        if i == 0:
            return self.q0
        if i == n:
            return self.qN
        return self.q

    def substitute(self, sub: Substitution) -> "ParameterSet":
        mapped = {name: substitute(getattr(self, name), sub) for name in PARAMETER_NAMES}
        return replace(self, **mapped)

    def lift(self) -> "ParameterSet":
        """The same parameters as elements of ``FIELD``."""
        return replace(self, **{name: transfer(getattr(self, name), FIELD) for name in PARAMETER_NAMES})

    def describe(self) -> Dict[str, Dict[str, str]]:
        return {name: to_json(getattr(self, name)) for name in PARAMETER_NAMES}


def power(a: FracElement, e: int) -> FracElement:
    """a**e in canonical form, negative exponents included."""
    if e >= 0:
        return a**e
    if not a:
        raise DivisionByZero("negative power of zero")
    return (1 / a) ** (-e)


def monomial(target: FracField, **exponents: int) -> FracElement:
    """Laurent monomial in named generators, e.g. ``monomial(PARAMS, q=-1, qN=2)``."""
    gens = gens_of(target)
    result = target.one
    for name, e in exponents.items():
        result = result * power(gens[name], e)
    return result


def product(values: Iterable[FracElement], target: FracField = PARAMS) -> FracElement:
    result = target.one
    for value in values:
        result = result * value
    return result


__all__ = [
    "FIELD",
    "PARAMS",
    "PARAM_GENS",
    "FIELD_GENS",
    "ParameterSet",
    "Substitution",
    "arith",
    "bar_involute",
    "from_json",
    "monomial",
    "position",
    "power",
    "probabilistic_zero_check",
    "product",
    "substitute",
    "to_json",
    "transfer",
    "transfer_poly",
]
