"""Parabolic Kazhdan-Lusztig bases of types BI, BII and BIII.

A diagram is read off a binary string by pairing adjacent down-up arrows into
arcs until every remaining up arrow sits left of every remaining down arrow.
The leftover down arrows are decorated according to the basis type, and the
vector is the tensor product of the building block of each piece.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from sympy.polys.fields import FracElement

from .errors import KLViolation, UnsupportedVariable, UsageError
from .field import PARAM_GENS, PARAMS, ParameterSet, Substitution, bar_involute, power, substitute, to_json
from .report import Report, ensure
from .tlrep import Vector, apply_e_vector
from .weyl import BinaryString, all_strings

logger = logging.getLogger(__name__)

# Generators a coefficient may use, per basis kind.
_ALLOWED = {"BI": ("q", "kappaN"), "BII": ("q", "qN", "kappaN"), "BIII": ("q", "qN", "kappaN")}


@dataclass(frozen=True)
class KLType:
    """Basis kind with the exponent M of q_N = q^M for type BI."""

    kind: str
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _ALLOWED:
            raise UsageError(f"unknown basis type {self.kind}")
        if self.kind == "BI" and (self.m is None or self.m < 1):
            raise UsageError("type BI needs M >= 1")

    @classmethod
    def parse(cls, text: str, m: Optional[int] = None) -> "KLType":
        if text.startswith("BI:"):
            return cls("BI", int(text[3:]))
        if text == "BI":
            return cls("BI", m)
        return cls(text)

    @property
    def label(self) -> str:
        return f"BI:{self.m}" if self.kind == "BI" else self.kind

    def substitution(self) -> Optional[Substitution]:
        """q_N -> q^M for type BI; nothing otherwise."""
        if self.kind != "BI":
            return None
        return Substitution.of({"qN": power(PARAM_GENS["q"], self.m)})

    def adapt(self, params: ParameterSet) -> ParameterSet:
        sub = self.substitution()
        return params.substitute(sub) if sub else params


@dataclass(frozen=True)
class Mark:
    """Decoration on an unpaired down arrow: p (BI), e or o (BII), circled p (BIII)."""

    kind: str
    value: int = 0

    def __str__(self) -> str:
        if self.kind == "circled":
            return f"({self.value})"
        return str(self.value) if self.kind == "p" else self.kind


@dataclass(frozen=True)
class KLDiagram:
    epsilon: BinaryString
    kl_type: KLType
    arcs: FrozenSet[Tuple[int, int]] = frozenset()
    dashed_arcs: FrozenSet[Tuple[int, int]] = frozenset()
    marks: Tuple[Tuple[int, Mark], ...] = ()
    unpaired: Tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.epsilon)

    def mark_at(self, site: int) -> Optional[Mark]:
        return dict(self.marks).get(site)


@dataclass
class KLVector:
    epsilon: BinaryString
    kl_type: KLType
    expansion: Dict[BinaryString, FracElement] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "basis": self.kl_type.label,
            "expansion": {beta: to_json(self.expansion[beta]) for beta in sorted(self.expansion)},
        }


def _pair_arcs(epsilon: BinaryString) -> Tuple[List[Tuple[int, int]], List[int]]:
    """Match down-up pairs like parentheses; return arcs and the leftover sites."""
    stack: List[int] = []
    arcs: List[Tuple[int, int]] = []
    leftover: List[int] = []
    for site, bit in enumerate(epsilon, start=1):
        if bit == "-":
            stack.append(site)
        elif stack:
            arcs.append((stack.pop(), site))
        else:
            leftover.append(site)
    return arcs, sorted(leftover + stack)


def build_diagram(epsilon: BinaryString, kl_type: KLType) -> KLDiagram:
    if any(bit not in "+-" for bit in epsilon):
        raise UsageError(f"not a binary string: {epsilon!r}")
    arcs, leftover = _pair_arcs(epsilon)
    downs = [site for site in reversed(leftover) if epsilon[site - 1] == "-"]
    marks: Dict[int, Mark] = {}
    dashed: List[Tuple[int, int]] = []
    if kl_type.kind == "BI":
        m = kl_type.m
        for k, site in enumerate(downs[:m], start=1):
            marks[site] = Mark("p", m + 1 - k)
        rest = downs[m:]
        for k in range(0, len(rest) - 1, 2):
            dashed.append((rest[k + 1], rest[k]))
    elif kl_type.kind == "BII":
        for k, site in enumerate(downs, start=1):
            marks[site] = Mark("o" if k % 2 else "e")
    else:
        for k, site in enumerate(downs, start=1):
            marks[site] = Mark("circled", k)
    in_dashed = {site for pair in dashed for site in pair}
    unpaired = tuple(site for site in leftover if site not in marks and site not in in_dashed)
    return KLDiagram(
        epsilon,
        kl_type,
        frozenset(arcs),
        frozenset(dashed),
        tuple(sorted(marks.items())),
        unpaired,
    )


def _mark_block(mark: Mark) -> Dict[str, FracElement]:
    """v_- + c v_+ for a decorated down arrow."""
    g = PARAM_GENS
    q, qN, kN = g["q"], g["qN"], g["kappaN"]
    if mark.kind == "p":
        c = -kN * power(q, -mark.value)
    elif mark.kind == "o":
        c = -kN / qN
    elif mark.kind == "e":
        c = kN * qN / q
    else:
        c = -kN * power(q, mark.value - 1) / qN
    return {"-": PARAMS.one, "+": c}


def _tensor(pieces: List[Tuple[Tuple[int, ...], Dict[str, FracElement]]], n: int) -> Vector:
    """Tensor product of blocks placed on the given sites."""
    partial: Dict[Tuple[Tuple[int, str], ...], FracElement] = {(): PARAMS.one}
    for sites, block in pieces:
        nxt = {}
        for assigned, coeff in partial.items():
            for bits, value in block.items():
                nxt[assigned + tuple(zip(sites, bits))] = coeff * value
        partial = nxt
    out: Vector = {}
    for assigned, coeff in partial.items():
        word = dict(assigned)
        out["".join(word[site] for site in range(1, n + 1))] = coeff
    return out


def expand(diagram: KLDiagram) -> KLVector:
    g = PARAM_GENS
    q, kN = g["q"], g["kappaN"]
    pieces = []
    for a, b in sorted(diagram.arcs):
        pieces.append(((a, b), {"-+": PARAMS.one, "+-": -1 / q}))
    for a, b in sorted(diagram.dashed_arcs):
        pieces.append(((a, b), {"--": PARAMS.one, "++": -kN * kN / q}))
    for site, mark in diagram.marks:
        pieces.append(((site,), _mark_block(mark)))
    for site in diagram.unpaired:
        pieces.append(((site,), {diagram.epsilon[site - 1]: PARAMS.one}))
    return KLVector(diagram.epsilon, diagram.kl_type, _tensor(pieces, diagram.n))


@lru_cache(maxsize=None)
def kl_vector(epsilon: BinaryString, kl_type: KLType) -> KLVector:
    return expand(build_diagram(epsilon, kl_type))


def _laurent_exponents(c: FracElement) -> List[Tuple[Dict[str, int], int]]:
    """Terms of c as (exponents by name, integer coefficient); empty if c is not a Laurent polynomial."""
    names = [str(sym) for sym in PARAMS.symbols]
    denom = c.denom.terms()
    if len(denom) != 1 or abs(denom[0][1]) != 1:
        return []
    d_exp, d_sign = denom[0]
    return [
        ({name: a - b for name, a, b in zip(names, exp, d_exp)}, coeff * d_sign)
        for exp, coeff in c.numer.terms()
    ]


def in_negative_part(monomial: Dict[str, int], kind: str) -> bool:
    """Membership of q^i qN^j kappaN^k in the lower part A_-^X of the ordered group."""
    if any(e for name, e in monomial.items() if name not in _ALLOWED[kind]):
        return False
    i, j, k = monomial.get("q", 0), monomial.get("qN", 0), monomial.get("kappaN", 0)
    if k < 0:
        return False
    if kind == "BI":
        return i < 0
    if kind == "BII":
        return i < 0 or (i == 0 and j < 0)
    return j < 0 or (j == 0 and i < 0)


def in_positive_part(c: FracElement, kind: str) -> bool:
    """Every monomial of c, with q and qN inverted, lies in the lower part."""
    terms = _laurent_exponents(c)
    flip = lambda mono: {name: e if name == "kappaN" else -e for name, e in mono.items()}
    return bool(terms) and all(in_negative_part(flip(mono), kind) for mono, _ in terms)


def verify_kl(vector: KLVector) -> Report:
    eps = vector.epsilon
    kind = vector.kl_type.kind
    lower = {beta: c for beta, c in vector.expansion.items() if beta != eps}
    report: Report = [
        ("leading-unit", vector.expansion.get(eps) == PARAMS.one),
        ("triangular", all(beta < eps for beta in lower)),
    ]
    members = True
    for c in lower.values():
        terms = _laurent_exponents(c)
        if not terms or not all(in_negative_part(mono, kind) for mono, _ in terms):
            members = False
            break
    report.append(("coefficient-ring", members))
    try:
        conjugates = [bar_involute(c) for c in lower.values()]
    except UnsupportedVariable:
        conjugates = None
    report.append(("bar-positive", conjugates is not None and all(in_positive_part(c, kind) for c in conjugates)))
    return report


def ensure_kl(vector: KLVector) -> Report:
    return ensure(verify_kl(vector), KLViolation)


@lru_cache(maxsize=None)
def specialized_vector(epsilon: BinaryString, kl_type: KLType, sub: Optional[Substitution] = None) -> Vector:
    """Standard-basis expansion of C_epsilon with ``sub`` applied to its coefficients."""
    expansion = kl_vector(epsilon, kl_type).expansion
    if sub is None:
        return dict(expansion)
    out = {}
    for beta, c in expansion.items():
        image = substitute(c, sub)
        if image:
            out[beta] = image
    return out


def to_kl_basis(
    vector: Vector, kl_type: KLType, sub: Optional[Substitution] = None
) -> Dict[BinaryString, FracElement]:
    """Coordinates in the KL basis, by back-substitution from the largest string."""
    remainder = {beta: c for beta, c in vector.items() if c}
    out: Dict[BinaryString, FracElement] = {}
    while remainder:
        top = max(remainder)
        c = remainder[top]
        out[top] = c
        for beta, value in specialized_vector(top, kl_type, sub).items():
            total = remainder.get(beta, c.field.zero) - c * value
            if total:
                remainder[beta] = total
            else:
                remainder.pop(beta, None)
    return out


def act_e_kl(
    params: ParameterSet,
    i: int,
    epsilon: BinaryString,
    kl_type: KLType,
    sub: Optional[Substitution] = None,
) -> Dict[BinaryString, FracElement]:
    """e_i C_epsilon expanded in the KL basis of the same type.

    ``sub`` is the specialization already applied to ``params``; the basis
    coefficients are specialized the same way.
    """
    params = kl_type.adapt(params)
    if sub is None:
        sub = kl_type.substitution()
    image = apply_e_vector(params, i, specialized_vector(epsilon, kl_type, sub))
    return to_kl_basis(image, kl_type, sub)


@lru_cache(maxsize=None)
def action_table(
    params: ParameterSet, i: int, n: int, kl_type: KLType, sub: Optional[Substitution] = None
) -> Dict[Tuple[BinaryString, BinaryString], FracElement]:
    """Structure constants A[(a, b)] = coefficient of C_a in e_i C_b."""
    table = {}
    for b in all_strings(n):
        for a, c in act_e_kl(params, i, b, kl_type, sub).items():
            table[(a, b)] = c
    logger.debug("action table of e_%d, N=%d, %s: %d entries", i, n, kl_type.label, len(table))
    return table


def never_reached(params: ParameterSet, n: int, kl_type: KLType) -> Report:
    """Rows of e_i that must be empty.

    e_i C_beta never contains C_alpha unless (alpha_i, alpha_{i+1}) = (-, +),
    and e_N C_beta never contains C_alpha with alpha_N = +.
    """
    report: Report = []
    for i in range(1, n + 1):
        table = action_table(params, i, n, kl_type)
        rows = {a for (a, _) in table}
        for alpha in all_strings(n):
            reachable = alpha[-1] == "-" if i == n else alpha[i - 1: i + 1] == "-+"
            if not reachable:
                report.append((f"unreached[{i},{alpha}]", alpha not in rows))
    return report
