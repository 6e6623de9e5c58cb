"""
Hilbert series of the invariant ring R^G (Molien's formula specialised to
permutation groups, i.e. Pólya counting) and the numerator that counts the
secondary invariants per degree when e_1, ..., e_n are the primary invariants.

Degree bounds used here: the numerator has degree at most binom(n, 2)
(the last secondary degree is binom(n, 2) - μ, where μ is the smallest degree
of a det-relative invariant; μ and the regularity β(R^G) are not computed).
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from app.services.config import get_settings
from app.services.errors import ConsistencyError, InputError, ResourceError
from app.services.evalpoints import epsilon
from app.services.monomials import compositions
from app.services.perm import PermGroup, orbit_of_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyQ:
    coeffs: Tuple[Fraction, ...]

    def __getitem__(self, d: int) -> Fraction:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        for d in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[d] != 0:
                return d
        return -1

    def to_ints(self) -> List[int]:
        out = []
        for d, c in enumerate(self.coeffs):
            if c.denominator != 1:
                raise ConsistencyError(f"coefficient {c} of z^{d} is not an integer")
            out.append(c.numerator)
        return out


@dataclass(frozen=True)
class SecondarySpec:
    n: int
    group_order: int
    numerator: PolyQ
    s: Tuple[int, ...]
    e: Tuple[int, ...]
    t: int

    @property
    def max_degree(self) -> int:
        return len(self.s) - 1

    @property
    def degree_bound(self) -> int:
        return math.comb(self.n, 2)

    @property
    def epsilon(self) -> int:
        return epsilon(self.n)

    def rational_form(self) -> str:
        """Hilbert series as numerator over ∏(1 - z^i)"""
        terms = []
        for d, c in enumerate(self.s):
            if c:
                mono = "1" if d == 0 else "z" if d == 1 else f"z^{d}"
                terms.append(mono if c == 1 else f"{c}*{mono}" if d else str(c))
        den = "".join("(1-z)" if i == 1 else f"(1-z^{i})" for i in range(1, self.n + 1))
        return f"({' + '.join(terms)})/({den})"


def _geometric_product(cycle_lengths, up_to: int) -> List[int]:
    """Power series of ∏ 1/(1 - z^c), truncated at z^up_to"""
    series = [1] + [0] * up_to
    for c in cycle_lengths:
        for k in range(c, up_to + 1):
            series[k] += series[k - c]
    return series


def hilbert_series(G: PermGroup, up_to: int) -> PolyQ:
    """
    (1/|G|) Σ_g ∏_{c ∈ cycle type of g} (1 - z^c)^(-1), truncated at z^up_to.

    Elements sharing a cycle type share one term.
    """
    if up_to < 0:
        raise InputError(f"up_to must be >= 0, got {up_to}")
    total = [0] * (up_to + 1)
    for ctype, count in G.cycle_type_tally().items():
        term = _geometric_product(ctype, up_to)
        for k in range(up_to + 1):
            total[k] += count * term[k]
    coeffs = []
    for d, value in enumerate(total):
        c = Fraction(value, G.order)
        if c.denominator != 1 or c < 0:
            raise ConsistencyError(f"Hilbert coefficient {c} of z^{d} is not a nonnegative integer")
        coeffs.append(c)
    return PolyQ(tuple(coeffs))


def secondary_spec(G: PermGroup) -> SecondarySpec:
    """Per-degree counts of secondary invariants from the Hilbert series numerator"""
    n = G.degree
    bound = math.comb(n, 2)
    window = bound + n
    series = [c.numerator for c in hilbert_series(G, window).coeffs]
    for i in range(1, n + 1):
        for k in range(window, i - 1, -1):
            series[k] -= series[k - i]
    if any(series[bound + 1:]):
        raise ConsistencyError(f"numerator has nonzero terms above degree {bound}")
    numerator = series[: bound + 1]
    while len(numerator) > 1 and numerator[-1] == 0:
        numerator.pop()
    if any(c < 0 for c in numerator):
        raise ConsistencyError(f"numerator {numerator} has a negative coefficient")
    if numerator[0] != 1:
        raise ConsistencyError(f"numerator constant term is {numerator[0]}, expected 1")

    s = tuple(numerator)
    e: List[int] = []
    for d, sd in enumerate(s):
        e.append(sd if d < n else e[d - n] + sd)
    t = sum(s)
    if t * G.order != math.factorial(n):
        raise ConsistencyError(f"numerator sums to {t}, expected n!/|G| = {math.factorial(n) // G.order}")
    logger.debug("secondary degrees for |G|=%d on %d points: %s", G.order, n, s)
    return SecondarySpec(
        n=n,
        group_order=G.order,
        numerator=PolyQ(tuple(Fraction(c) for c in s)),
        s=s,
        e=tuple(e),
        t=t,
    )


def burnside_dimension(G: PermGroup, d: int, guard: int = None) -> int:
    """Number of G-orbits of degree-d monomials, by explicit orbit partitioning"""
    if d < 0:
        raise InputError(f"degree must be >= 0, got {d}")
    guard = get_settings().burnside_guard if guard is None else guard
    n = G.degree
    size = math.comb(d + n - 1, n - 1)
    if size > guard:
        raise ResourceError(f"{size} monomials of degree {d} exceed the enumeration guard {guard}")
    seen = set()
    orbits = 0
    for alpha in compositions(d, n):
        if alpha in seen:
            continue
        orbits += 1
        seen |= orbit_of_vector(G, alpha)
    return orbits
