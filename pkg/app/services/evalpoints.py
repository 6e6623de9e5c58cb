"""
Evaluation points and the evaluation morphism Φ.

The points are the coordinate permutations of (1, ζ, ..., ζ^(n-1)), one per
G-orbit; a point is recorded by its exponent word. Φ sends an invariant p to
(p(point))_point in K^r, r = n!/|G|, and turns products into pointwise
(Hadamard) products.
"""
import collections.abc
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.services.config import get_settings
from app.services.cyclo import CycloElement, CycloField
from app.services.errors import ConsistencyError, InputError, ResourceError
from app.services.perm import PermGroup, orbit_of_vector

logger = logging.getLogger(__name__)

EvalVector = Tuple[CycloElement, ...]


@dataclass(frozen=True)
class EvalPoint:
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.exponents) != list(range(len(self.exponents))):
            raise InputError(f"{self.exponents} is not a permutation word")


@dataclass(frozen=True)
class PointSet:
    field: CycloField
    points: Tuple[EvalPoint, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def ones(self) -> EvalVector:
        return (self.field.one(),) * self.size

    def zeros(self) -> EvalVector:
        return (self.field.zero(),) * self.size


def epsilon(n: int) -> int:
    """e_n(1, ζ, ..., ζ^(n-1))"""
    return (-1) ** (n + 1)


def build_point_set(G: PermGroup, F: CycloField, max_n: Optional[int] = None) -> PointSet:
    """
    One point per G-orbit of the n! permutation words.

    Words are walked in lex-ascending order and each unseen word opens a new
    orbit, so every representative is the lex-min of its orbit and the points
    come out sorted.
    """
    n = G.degree
    if F.n != n:
        raise InputError(f"field Q(ζ_{F.n}) does not match degree {n}")
    max_n = get_settings().max_points_n if max_n is None else max_n
    if n > max_n:
        raise ResourceError(f"enumerating {n}! permutation words exceeds the cap n <= {max_n}")
    seen = set()
    points = []
    for word in itertools.permutations(range(n)):
        if word in seen:
            continue
        orbit = orbit_of_vector(G, word)
        seen |= orbit
        points.append(EvalPoint(word))
    expected = math.factorial(n) // G.order
    if len(points) != expected:
        raise ConsistencyError(f"found {len(points)} evaluation points, expected {expected}")
    return PointSet(field=F, points=tuple(points))


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def eval_monomial(m: Sequence[int], p: EvalPoint, F: CycloField) -> CycloElement:
    """x^α(point) = ζ^(<α, exponents> mod n)"""
    if len(m) != len(p.exponents):
        raise InputError(f"monomial of length {len(m)} at a point of length {len(p.exponents)}")
    return F.root_power(_dot(m, p.exponents))


def eval_orbitsum(G: PermGroup, m: Sequence[int], P: PointSet) -> EvalVector:
    """Φ of the orbit sum of x^m, tallying residues before touching the field"""
    F = P.field
    n = F.n
    orbit = sorted(orbit_of_vector(G, m))
    values = []
    for point in P.points:
        e = point.exponents
        counts = [0] * n
        for beta in orbit:
            counts[_dot(beta, e) % n] += 1
        values.append(F.from_residue_counts(counts))
    return tuple(values)


def eval_polynomial(poly: Dict[Tuple[int, ...], Fraction], P: PointSet) -> EvalVector:
    """Φ of an expanded polynomial, monomial by monomial"""
    F = P.field
    values = []
    for point in P.points:
        residues = [Fraction(0)] * F.n
        for alpha, c in poly.items():
            residues[_dot(alpha, point.exponents) % F.n] += c
        value = F.zero()
        for k, c in enumerate(residues):
            if c:
                value = value + F.root_power(k) * c
        values.append(value)
    return tuple(values)


def eval_elementary(i: int, P: PointSet) -> EvalVector:
    """Φ(e_i), computed by expanding e_i at every point"""
    F = P.field
    n = F.n
    if not 1 <= i <= n:
        raise InputError(f"elementary symmetric index {i} outside 1..{n}")
    values = []
    for point in P.points:
        partial = [F.one()] + [F.zero()] * i
        for k, e in enumerate(point.exponents):
            x = F.root_power(e)
            for j in range(min(k + 1, i), 0, -1):
                partial[j] = partial[j] + x * partial[j - 1]
        values.append(partial[i])
    return tuple(values)


def hadamard(a: EvalVector, b: EvalVector) -> EvalVector:
    if len(a) != len(b):
        raise InputError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x * y for x, y in zip(a, b))


class ProductVector(collections.abc.Sequence):
    """Hadamard product of two evaluation vectors, computed on first access"""

    __slots__ = ("_left", "_right", "_values")

    def __init__(self, left: Sequence[CycloElement], right: Sequence[CycloElement]):
        if len(left) != len(right):
            raise InputError(f"length mismatch: {len(left)} vs {len(right)}")
        self._left = left
        self._right = right
        self._values: Optional[EvalVector] = None

    @property
    def values(self) -> EvalVector:
        if self._values is None:
            self._values = hadamard(self._left, self._right)
            self._left = self._right = None
        return self._values

    def __len__(self) -> int:
        return len(self._values) if self._values is not None else len(self._left)

    def __getitem__(self, index):
        return self.values[index]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other) -> bool:
        if isinstance(other, (tuple, ProductVector)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        state = "evaluated" if self._values is not None else "pending"
        return f"ProductVector({len(self)} entries, {state})"


_worker_state: Dict[str, object] = {}


def _init_worker(G: PermGroup, P: PointSet) -> None:
    _worker_state["group"] = G
    _worker_state["points"] = P


def _eval_in_worker(m: Tuple[int, ...]) -> EvalVector:
    return eval_orbitsum(_worker_state["group"], m, _worker_state["points"])


class OrbitSumEvaluator:
    """
    Evaluates batches of orbit sums, in a process pool when workers > 1.

    Results always come back in the order of the input monomials.
    """

    def __init__(self, G: PermGroup, P: PointSet, workers: int = 1):
        self.group = G
        self.points = P
        self.workers = max(1, workers)
        self._pool: Optional[ProcessPoolExecutor] = None

    def __enter__(self) -> "OrbitSumEvaluator":
        if self.workers > 1:
            self._pool = ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(self.group, self.points),
            )
        return self

    def __exit__(self, *exc) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    @property
    def batch_size(self) -> int:
        return 1 if self._pool is None else 4 * self.workers

    def evaluate(self, monomials: List[Tuple[int, ...]]) -> List[EvalVector]:
        if self._pool is None:
            return [eval_orbitsum(self.group, m, self.points) for m in monomials]
        return list(self._pool.map(_eval_in_worker, monomials))
