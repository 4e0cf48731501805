"""Type C weight combinatorics.

Weights are integer tuples. The finite Weyl group W0 is generated by the
transpositions s_1..s_{N-1} and the sign change s_N of the last entry; the
affine generator s_0 acts by v_1 -> -1 - v_1. Binary strings are Python
strings over "+" and "-", ordered with "+" < "-" (ASCII order).
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Generic, List, Optional, Tuple, TypeVar

from .errors import NotAdmissible, OddOnly, UsageError
from .laurent import dominant

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]
BinaryString = str
Vertex = TypeVar("Vertex")

TWO_BOUNDARY, ONE_BOUNDARY = "two", "one"


def weight_act(i: int, lam: Weight) -> Weight:
    """Affine Weyl action of s_i on Z^N (0 <= i <= N)."""
    n = len(lam)
    if not 0 <= i <= n:
        raise UsageError(f"generator index {i} outside 0..{n}")
    if i == 0:
        return (-1 - lam[0],) + lam[1:]
    if i == n:
        return lam[:-1] + (-lam[-1],)
    return lam[: i - 1] + (lam[i], lam[i - 1]) + lam[i + 1:]


def _finite_act(i: int, lam: Weight) -> Weight:
    if i == len(lam):
        return lam[:-1] + (-lam[-1],)
    return lam[: i - 1] + (lam[i], lam[i - 1]) + lam[i + 1:]


@dataclass(frozen=True)
class WeightData:
    """Derived data of a weight: dominant form, shortest word, rho and sigma."""

    weight: Weight
    dominant: Weight
    word: Tuple[int, ...]
    rho: Tuple[int, ...]
    sigma: Tuple[int, ...]


@lru_cache(maxsize=None)
def _orbit_table(lam_plus: Weight) -> Dict[Weight, Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Breadth-first walk of W0 * lam_plus, recording shortest words and w * rho."""
    n = len(lam_plus)
    rho = tuple(range(n - 1, -1, -1))
    table = {lam_plus: ((), rho)}
    queue = deque([lam_plus])
    while queue:
        current = queue.popleft()
        word, current_rho = table[current]
        for i in range(1, n + 1):
            nxt = _finite_act(i, current)
            if nxt in table:
                continue
            table[nxt] = ((i,) + word, _finite_act(i, current_rho))
            queue.append(nxt)
    logger.debug("orbit of %s has %d elements", lam_plus, len(table))
    return table


def orbit(lam_plus: Weight) -> List[Weight]:
    """The W0-orbit of a dominant weight, in breadth-first order."""
    return list(_orbit_table(tuple(lam_plus)))


def weight_data(lam: Weight) -> WeightData:
    lam = tuple(lam)
    lam_plus = dominant(lam)
    word, rho = _orbit_table(lam_plus)[lam]
    sigma = tuple(-1 if x < 0 else 1 for x in lam)
    return WeightData(lam, lam_plus, word, rho, sigma)


def specialization_pair(case: str, r: int) -> Tuple[int, int]:
    """(k, r') for the two- and one-boundary specializations."""
    if r < 1:
        raise UsageError("r must be a positive integer")
    if case == TWO_BOUNDARY:
        return 1, r + 1
    if case == ONE_BOUNDARY:
        return 2, 2 * r + 1
    raise UsageError(f"unknown boundary case: {case}")


def is_neighbourhood(lam: Weight, i: int, j: int, k: int, r_prime: int) -> bool:
    """Test the neighbourhood conditions for the ordered pair (i, j), 1-based."""
    if i == j:
        raise UsageError("a neighbourhood pair needs two distinct indices")
    data = weight_data(lam)
    a, b = i - 1, j - 1
    if abs(data.rho[a]) - abs(data.rho[b]) != k:
        return False
    gap = abs(lam[a]) - abs(lam[b])
    if gap > r_prime - 1:
        return False
    if gap < r_prime - 1:
        return True
    signs = (data.sigma[a], data.sigma[b])
    return (signs == (1, 1) and i > j) or (signs == (-1, -1) and i < j) or signs == (-1, 1)


def is_admissible(lam: Weight, k: int, r_prime: int) -> bool:
    n = len(lam)
    return not any(
        is_neighbourhood(lam, i, j, k, r_prime)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    )


def nu(n: int, r: int, j: int, sign: str = "+") -> Weight:
    if sign == "+":
        return tuple(j + r * (n - i) for i in range(1, n + 1))
    return tuple(-j - r * (i - 1) for i in range(1, n + 1))


def xi0(n: int, r: int) -> Weight:
    half = (n + 1) // 2
    return tuple(
        2 * (half - i) * r if i <= half else (2 * n - 2 * i + 1) * r for i in range(1, n + 1)
    )


def xi1(n: int, r: int) -> Weight:
    if n % 2 == 0:
        raise OddOnly(f"xi1 is only defined for odd N, got N={n}")
    return tuple((n - 2 * i) * r if i <= (n - 1) // 2 else (2 * n - 2 * i) * r for i in range(1, n + 1))


def xi_plus(n: int, r: int) -> Weight:
    return tuple((n - i) * r for i in range(1, n + 1))


def families(n: int, r: int, j: int) -> Dict[str, Optional[Weight]]:
    """The weight families nu^{J,+}, nu^{J,-}, xi0, xi1 (odd N only) and xi+."""
    if n < 2 or r < 1 or j < 1:
        raise UsageError("families need N >= 2, r >= 1 and J >= 1")
    return {
        "nu+": nu(n, r, j, "+"),
        "nu-": nu(n, r, j, "-"),
        "xi0": xi0(n, r),
        "xi1": xi1(n, r) if n % 2 else None,
        "xi+": xi_plus(n, r),
    }


@dataclass
class AdmGraph(Generic[Vertex]):
    """Undirected graph with edges labelled by generator index."""

    vertices: List[Vertex] = field(default_factory=list)
    edges: FrozenSet[Tuple[Vertex, Vertex, int]] = frozenset()

    def to_json(self) -> dict:
        index = {v: k for k, v in enumerate(self.vertices)}
        edges = sorted((index[a], index[b], i) for a, b, i in self.edges)
        return {
            "vertices": [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            "edges": [{"from": a, "to": b, "label": i} for a, b, i in edges],
        }


def _edge(a, b, label):
    return (a, b, label) if a < b else (b, a, label)


def build_gamma(lam0: Weight, k: int, r_prime: int) -> AdmGraph[Weight]:
    """Connected component of lam0 among admissible weights under s_1..s_N."""
    lam0 = tuple(lam0)
    if not is_admissible(lam0, k, r_prime):
        raise NotAdmissible(f"{lam0} is not admissible for (k, r')=({k}, {r_prime})")
    n = len(lam0)
    seen = {lam0}
    edges = set()
    queue = deque([lam0])
    while queue:
        current = queue.popleft()
        for i in range(1, n + 1):
            nxt = _finite_act(i, current)
            if nxt == current or not is_admissible(nxt, k, r_prime):
                continue
            edges.add(_edge(current, nxt, i))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return AdmGraph(sorted(seen), frozenset(edges))


def admissible_in_orbit(lam_plus: Weight, k: int, r_prime: int) -> List[Weight]:
    """All admissible elements of W0 * lam_plus, connected or not."""
    return sorted(lam for lam in orbit(dominant(lam_plus)) if is_admissible(lam, k, r_prime))


def all_strings(n: int) -> List[BinaryString]:
    return sorted("".join(bits) for bits in product("+-", repeat=n))


def string_act(i: int, alpha: BinaryString) -> BinaryString:
    """s_i on binary strings: swap sites i, i+1, or flip the last site."""
    n = len(alpha)
    if not 1 <= i <= n:
        raise UsageError(f"generator index {i} outside 1..{n}")
    if i == n:
        return alpha[:-1] + ("-" if alpha[-1] == "+" else "+")
    return alpha[: i - 1] + alpha[i] + alpha[i - 1] + alpha[i + 1:]


def build_gamma_prime(n: int) -> AdmGraph[BinaryString]:
    edges = set()
    for alpha in all_strings(n):
        for i in range(1, n + 1):
            beta = string_act(i, alpha)
            if beta != alpha:
                edges.add(_edge(alpha, beta, i))
    return AdmGraph(all_strings(n), frozenset(edges))


def count_edges(graph: AdmGraph) -> int:
    return len(graph.edges)


def edge_recurrence(n: int) -> int:
    """D_N from D_2 = 3 and D_N = 2 D_{N-1} + 2^{N-2}."""
    if n < 2:
        raise UsageError("the edge recurrence starts at N = 2")
    d = 3
    for m in range(3, n + 1):
        d = 2 * d + 2 ** (m - 2)
    return d


def phi(weight: Weight, sign: str) -> BinaryString:
    """Sign pattern of +weight (sign "+") or -weight (sign "-")."""
    factor = 1 if sign == "+" else -1
    return "".join("+" if factor * x > 0 else "-" for x in weight)


def phi_inverse(alpha: BinaryString, sign: str, n: int, r: int, j: int) -> Weight:
    """Greedy inverse of phi over the absolute values J, J+r, ..., J+(N-1)r."""
    if len(alpha) != n:
        raise UsageError(f"binary string {alpha!r} does not have length {n}")
    remaining = [j + r * m for m in range(n)]
    out = []
    for bit in alpha:
        take_max = (bit == "+") == (sign == "+")
        value = max(remaining) if take_max else min(remaining)
        remaining.remove(value)
        out.append(value if take_max else -value)
    return tuple(out)


def check_graph_iso(gamma: AdmGraph[Weight], gamma_prime: AdmGraph[BinaryString], sign: str) -> bool:
    """True if phi with the given sign is a label-preserving isomorphism."""
    images = {v: phi(v, sign) for v in gamma.vertices}
    if sorted(images.values()) != sorted(gamma_prime.vertices) or len(set(images.values())) != len(images):
        return False
    mapped = {_edge(images[a], images[b], i) for a, b, i in gamma.edges}
    return mapped == set(gamma_prime.edges)
