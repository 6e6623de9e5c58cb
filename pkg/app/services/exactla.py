"""
Incremental reduced row-echelon bases over a cyclotomic field, and their
images over a prime field.

For a prime p ≡ 1 (mod n) and w a primitive n-th root of unity mod p, ζ ↦ w
is a ring map from the p-integral part of Q(ζ) onto GF(p). Vectors whose
images are independent over GF(p) are independent over Q(ζ): a maximal
minor that is nonzero mod p is nonzero. The converse can fail, so a
dependence found mod p is only ever a reason to skip a candidate.
"""
import bisect
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from sympy import isprime, primitive_root

from app.services.cyclo import CycloElement, CycloField
from app.services.errors import ConsistencyError, InputError

# Images are kept below 2^21 so that a float64 dot product of 2048 terms is exact.
PRIME_BOUND = 1 << 21
_CHUNK = 2048


class EchelonBasis:
    """
    Rows in fully reduced echelon form: each pivot entry is 1 and every other
    row is 0 in that column. Rows are kept sorted by pivot column, so reducing
    a vector is a single forward pass.
    """

    def __init__(self, field: CycloField, width: int):
        self.field = field
        self.width = width
        self.rows: List[List[CycloElement]] = []
        self.pivots: List[int] = []
        self._supports: List[List[int]] = []

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def _check(self, v: Sequence[CycloElement]) -> None:
        if len(v) != self.width:
            raise InputError(f"vector of width {len(v)} for a basis of width {self.width}")

    def reduce(self, v: Sequence[CycloElement]) -> List[CycloElement]:
        """Residual of v after clearing every pivot column; zero iff v is in the span"""
        self._check(v)
        residual = list(v)
        for row, pivot, support in zip(self.rows, self.pivots, self._supports):
            c = residual[pivot]
            if c.is_zero():
                continue
            for j in support:
                residual[j] = residual[j].sub_mul(c, row[j])
        return residual

    def contains(self, v: Sequence[CycloElement]) -> bool:
        return all(x.is_zero() for x in self.reduce(v))

    def insert(self, v: Sequence[CycloElement]) -> bool:
        """Add v to the span; returns whether the dimension grew"""
        residual = self.reduce(v)
        pivot = next((j for j, x in enumerate(residual) if not x.is_zero()), None)
        if pivot is None:
            return False
        scale = residual[pivot].invert()
        row = [x * scale if not x.is_zero() else x for x in residual]
        support = [j for j, x in enumerate(row) if not x.is_zero()]
        for k, other in enumerate(self.rows):
            c = other[pivot]
            if c.is_zero():
                continue
            for j in support:
                other[j] = other[j].sub_mul(c, row[j])
            self._supports[k] = [j for j, x in enumerate(other) if not x.is_zero()]
        at = bisect.bisect(self.pivots, pivot)
        self.rows.insert(at, row)
        self.pivots.insert(at, pivot)
        self._supports.insert(at, support)
        return True

    def clone(self) -> "EchelonBasis":
        copy = EchelonBasis(self.field, self.width)
        copy.rows = [list(row) for row in self.rows]
        copy.pivots = list(self.pivots)
        copy._supports = [list(s) for s in self._supports]
        return copy


@lru_cache(maxsize=None)
def reduction_primes(n: int, count: int = 3) -> Tuple[int, ...]:
    """The largest primes p < PRIME_BOUND with p ≡ 1 (mod n), descending"""
    if n < 1:
        raise InputError(f"reduction primes need n >= 1, got {n}")
    primes = []
    k = (PRIME_BOUND - 2) // n
    while len(primes) < count and k > 0:
        p = k * n + 1
        if isprime(p):
            primes.append(p)
        k -= 1
    return tuple(primes)


class ModularReduction:
    """The ring map ζ ↦ w into GF(p), w a primitive n-th root of unity mod p"""

    def __init__(self, field: CycloField, prime: int):
        if not isprime(prime) or prime >= PRIME_BOUND:
            raise InputError(f"{prime} is not a prime below {PRIME_BOUND}")
        if (prime - 1) % field.n:
            raise InputError(f"GF({prime}) has no primitive {field.n}-th root of unity")
        self.field = field
        self.prime = prime
        self.root = pow(primitive_root(prime), (prime - 1) // field.n, prime)
        self._powers = np.array([pow(self.root, i, prime) for i in range(field.phi_n)], dtype=np.int64)

    def __repr__(self) -> str:
        return f"ModularReduction(n={self.field.n}, p={self.prime}, w={self.root})"

    def _inverse(self, den: int) -> int:
        if den % self.prime == 0:
            raise ConsistencyError(f"denominator {den} vanishes mod {self.prime}")
        return pow(den, -1, self.prime)

    def element(self, x: CycloElement) -> int:
        value = sum(c * int(w) for c, w in zip(x.nums, self._powers)) % self.prime
        return value if x.den == 1 else value * self._inverse(x.den) % self.prime

    def image(self, v: Sequence[CycloElement]) -> np.ndarray:
        p = self.prime
        nums = np.array([[c % p for c in x.nums] for x in v], dtype=np.int64).reshape(len(v), self.field.phi_n)
        values = nums @ self._powers % p
        dens = [x.den for x in v]
        if any(den != 1 for den in dens):
            values = values * np.array([self._inverse(den) for den in dens], dtype=np.int64) % p
        return values

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Image of a pointwise product"""
        if a.shape != b.shape:
            raise InputError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
        return np.multiply(a, b, dtype=np.int64) % self.prime


class ModularEchelonBasis:
    """
    Reduced echelon rows over GF(p), stored densely as float64 so that
    reduction is a matrix-vector product. Every entry is an integer in
    [0, p), and every intermediate stays below 2^53.
    """

    def __init__(self, reduction: ModularReduction, width: int, capacity: int = 0):
        self.reduction = reduction
        self.prime = reduction.prime
        self.width = width
        self._rows = np.zeros((max(capacity, 1), width), dtype=np.float64)
        self._pivots = np.zeros(max(capacity, 1), dtype=np.intp)
        self._dimension = 0

    @property
    def dimension(self) -> int:
        return self._dimension

    def __len__(self) -> int:
        return self._dimension

    @property
    def pivots(self) -> List[int]:
        return [int(j) for j in self._pivots[: self._dimension]]

    @property
    def rows(self) -> np.ndarray:
        return self._rows[: self._dimension]

    def reserve(self, capacity: int) -> None:
        if capacity <= self._rows.shape[0]:
            return
        rows = np.zeros((capacity, self.width), dtype=np.float64)
        rows[: self._dimension] = self.rows
        pivots = np.zeros(capacity, dtype=np.intp)
        pivots[: self._dimension] = self._pivots[: self._dimension]
        self._rows, self._pivots = rows, pivots

    def reduce(self, image: np.ndarray) -> np.ndarray:
        if image.shape != (self.width,):
            raise InputError(f"vector of width {image.shape[0]} for a basis of width {self.width}")
        p = float(self.prime)
        v = np.mod(image.astype(np.float64), p)
        k = self._dimension
        if not k:
            return v
        coefficients = v[self._pivots[:k]]
        acc = np.zeros(self.width, dtype=np.float64)
        for start in range(0, k, _CHUNK):
            stop = min(start + _CHUNK, k)
            acc = np.mod(acc + np.mod(coefficients[start:stop] @ self._rows[start:stop], p), p)
        return np.mod(v - acc, p)

    def contains(self, image: np.ndarray) -> bool:
        return not np.any(self.reduce(image))

    def insert(self, image: np.ndarray) -> bool:
        residual = self.reduce(image)
        nonzero = np.flatnonzero(residual)
        if nonzero.size == 0:
            return False
        p = self.prime
        pivot = int(nonzero[0])
        row = np.mod(residual * pow(int(residual[pivot]), -1, p), float(p))
        k = self._dimension
        if k:
            column = self._rows[:k, pivot]
            touched = np.flatnonzero(column)
            if touched.size:
                rows = self._rows[touched]
                self._rows[touched] = np.mod(rows - column[touched, None] * row[None, :], float(p))
        if k == self._rows.shape[0]:
            self.reserve(2 * k)
        self._rows[k] = row
        self._pivots[k] = pivot
        self._dimension = k + 1
        return True


def modular_rank(vectors: Sequence[Sequence[CycloElement]], reduction: ModularReduction) -> int:
    """Rank of the images; a lower bound for the rank over Q(ζ)"""
    if not vectors:
        return 0
    basis = ModularEchelonBasis(reduction, len(vectors[0]), len(vectors))
    for v in vectors:
        basis.insert(reduction.image(v))
    return basis.dimension
