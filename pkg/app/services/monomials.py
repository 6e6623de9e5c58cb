"""
Exponent vectors under the staircase and their G-orbit representatives.

A monomial x^α is under the staircase when α_i <= n - 1 - i (0-based). The
n! staircase monomials form a basis of K[x] over the symmetric polynomials,
so their orbit sums span R^G as a module over them.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from app.services.errors import InputError
from app.services.perm import PermGroup, orbit_of_vector

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def compositions(d: int, n: int) -> Iterator[Monomial]:
    """All length-n vectors of nonnegative integers summing to d, lex-descending"""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in compositions(d - first, n - 1):
            yield (first,) + rest


def staircase_vectors(n: int, d: int) -> Iterator[Monomial]:
    """Under-staircase vectors of degree d, lex-descending"""

    def walk(i: int, remaining: int) -> Iterator[Monomial]:
        if i == n:
            if remaining == 0:
                yield ()
            return
        # the tail can absorb at most Σ_{j>i} (n-1-j)
        capacity = (n - 1 - i) * (n - 2 - i) // 2
        top = min(n - 1 - i, remaining)
        for a in range(top, -1, -1):
            if remaining - a > capacity:
                break
            for rest in walk(i + 1, remaining - a):
                yield (a,) + rest

    yield from walk(0, d)


def is_under_staircase(m: Sequence[int]) -> bool:
    n = len(m)
    return all(a <= n - 1 - i for i, a in enumerate(m))


def is_partition(m: Sequence[int]) -> bool:
    """Nonzero and weakly decreasing"""
    return any(m) and all(a >= b for a, b in zip(m, m[1:]))


def canonical_representative(G: PermGroup, m: Sequence[int]) -> Monomial:
    """Lexicographically greatest element of the G-orbit of m"""
    return max(orbit_of_vector(G, m))


@dataclass(frozen=True)
class CandidateStream:
    """
    One representative per G-orbit meeting the staircase in degree d.

    Under-staircase vectors are walked in lex-descending order and the first
    member met in each orbit is emitted; this is the lex-max of the orbit
    whenever that lies under the staircase.
    """
    group: PermGroup
    degree: int
    exclude_partitions: bool = False

    def __post_init__(self):
        bound = math.comb(self.group.degree, 2)
        if not 0 <= self.degree <= bound:
            raise InputError(f"degree {self.degree} outside 0..{bound}")

    def __iter__(self) -> Iterator[Monomial]:
        seen = set()
        for alpha in staircase_vectors(self.group.degree, self.degree):
            if alpha in seen:
                continue
            seen |= orbit_of_vector(self.group, alpha)
            if self.exclude_partitions and is_partition(alpha):
                continue
            yield alpha


def candidates_of_degree(G: PermGroup, d: int, exclude_partitions: bool = False) -> List[Monomial]:
    return list(CandidateStream(G, d, exclude_partitions))


def canonical_counts(G: PermGroup) -> Dict[int, int]:
    """Number of staircase-meeting orbits in each degree 0..binom(n,2)"""
    return {d: len(candidates_of_degree(G, d)) for d in range(math.comb(G.degree, 2) + 1)}


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def count_canonical(G: PermGroup) -> Tuple[int, int]:
    """(C, C') with C the number of canonical staircase monomials and C' = C - catalan(n) + 1"""
    total = sum(canonical_counts(G).values())
    return total, total - catalan(G.degree) + 1
